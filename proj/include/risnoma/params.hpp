#pragma once

#include <cmath>
#include <string>

#include "risnoma/channel.hpp"
#include "risnoma/errors.hpp"
#include "risnoma/geometry.hpp"

namespace risnoma {

struct Thresholds {
    double gamma_sic_th = 0.01;
    double gamma_t_th = 0.01;
    double gamma_c_th = 0.01;
    // Rate form, kept for reference when thresholds were derived from rates.
    double R_t = 0.0;
    double R_c = 0.0;
    double B_w = 0.0;

    static double from_rate(double rate_bps, double bandwidth_hz) {
        if (!(bandwidth_hz > 0.0)) throw DomainError("bandwidth must be > 0");
        return std::exp2(rate_bps / bandwidth_hz) - 1.0;
    }

    void validate(const PowerAllocation& pa) const {
        if (!(gamma_sic_th >= 0.0 && gamma_t_th >= 0.0 && gamma_c_th >= 0.0))
            throw DomainError("thresholds must be >= 0");
        const double cap = pa.a_c / pa.a_t;
        if (!(gamma_sic_th < cap)) throw DomainError("gamma_sic_th < a_c/a_t required");
        if (!(gamma_c_th < cap)) throw DomainError("gamma_c_th < a_c/a_t required");
    }
};

struct SystemParameters {
    SpatialParams spatial;
    ChannelParams channel;
    PowerAllocation power;
    ModelOptions options;

    void validate() const {
        spatial.validate();
        channel.validate();
        power.validate();
    }

    // Extra checks needed before Monte Carlo: the far-field compensation needs
    // alpha > 2 and the truncated direct-law interference must be negligible.
    void validate_for_simulation() const {
        validate();
        if (options.far_field_tail && !(channel.alpha_t > 2.0))
            throw DomainError("alpha_t > 2 required for simulation (interference diverges otherwise)");
        const double frac = truncation_fraction(spatial.r_c, spatial.sim_radius, channel.alpha_c);
        if (frac > 1e-3)
            throw DomainError("sim_radius too small: truncated direct-link interference fraction " +
                              std::to_string(frac) + " exceeds 1e-3");
    }
};

} // namespace risnoma
