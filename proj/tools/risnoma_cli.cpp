#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "risnoma/risnoma.hpp"

namespace {

using namespace risnoma;

double arg_double(const std::vector<std::string>& args, std::size_t i) {
    if (i >= args.size()) throw DomainError("missing argument " + std::to_string(i + 1));
    double v = 0.0;
    const std::string& s = args[i];
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw DomainError("not a number: " + s);
    return v;
}

int arg_int(const std::vector<std::string>& args, std::size_t i) {
    const double v = arg_double(args, i);
    if (v != static_cast<int>(v)) throw DomainError("not an integer: " + args[i]);
    return static_cast<int>(v);
}

std::string full_precision(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

int specfun_eval(const std::string& fn, const std::vector<std::string>& a) {
    if (fn == "hyp2f1") {
        const auto e = specfun::gauss_2f1_eval(arg_double(a, 0), arg_double(a, 1), arg_double(a, 2), arg_double(a, 3));
        std::cout << full_precision(e.value) << '\n';
    } else if (fn == "erfc") {
        std::cout << full_precision(specfun::erfc(arg_double(a, 0))) << '\n';
    } else if (fn == "erfcx") {
        std::cout << full_precision(specfun::erfcx(arg_double(a, 0))) << '\n';
    } else if (fn == "alzer_eta") {
        std::cout << full_precision(specfun::alzer_eta(arg_int(a, 0))) << '\n';
    } else if (fn == "gamma_cdf_alzer") {
        std::cout << full_precision(specfun::gamma_cdf_alzer_approx(arg_double(a, 0), arg_int(a, 1))) << '\n';
    } else if (fn == "binomial") {
        std::cout << full_precision(specfun::binomial(arg_int(a, 0), arg_int(a, 1))) << '\n';
    } else if (fn == "chebyshev_gauss") {
        const auto r = specfun::chebyshev_gauss(arg_int(a, 0));
        for (int i = 0; i < r.order; ++i) std::cout << full_precision(r.nodes[i]) << ' ' << full_precision(r.weights[i]) << '\n';
    } else {
        std::cerr << "unknown function '" << fn
                  << "' (hyp2f1 a b c z | erfc x | erfcx x | alzer_eta m | gamma_cdf_alzer x m | binomial n k | chebyshev_gauss K)\n";
        return 2;
    }
    return 0;
}

harness::Config config_from(const std::string& path) {
    return path.empty() ? harness::default_config() : harness::load_config(path);
}

void write_out(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIS-aided NOMA coverage and rate engine"};
    app.require_subcommand(1);

    std::string sweep_config, preset, sweep_out = "-";
    bool timing = false;
    auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep and write CSV");
    sweep->add_option("--config", sweep_config, "INI config file (defaults when omitted)");
    sweep->add_option("--preset", preset, "paper-defaults | fig3 .. fig8");
    sweep->add_option("--out", sweep_out, "output CSV path ('-' for stdout)");
    sweep->add_flag("--timing", timing, "append wall-clock comment rows");

    std::string val_config, profile = "default", val_out = "-";
    long n_trials = -1;
    std::uint64_t seed = 0;
    auto* validate = app.add_subcommand("validate", "Cross-check analytic and simulated results");
    validate->add_option("--config", val_config, "INI config file (defaults when omitted)");
    validate->add_option("--profile", profile, "default | strict")->check(CLI::IsMember({"default", "strict"}));
    validate->add_option("--out", val_out, "report CSV path ('-' for stdout)");
    validate->add_option("--n-trials", n_trials, "Monte Carlo drops (overrides the config)");
    validate->add_option("--seed", seed, "master seed (overrides the config)");

    auto* sf = app.add_subcommand("specfun", "Evaluate a special function");
    auto* eval = sf->add_subcommand("eval", "specfun eval <fn> <args...>");
    sf->require_subcommand(1);
    std::string fn;
    std::vector<std::string> fn_args;
    eval->add_option("fn", fn, "function name")->required();
    eval->add_option("args", fn_args, "arguments");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sweep) {
            harness::Config cfg = config_from(sweep_config);
            if (!preset.empty() && preset != "paper-defaults") cfg.series = harness::sweep_preset(preset);
            write_out(sweep_out, harness::run_sweep(cfg, harness::SweepOptions{0, timing}));
            return 0;
        }
        if (*validate) {
            const harness::Config cfg = config_from(val_config);
            harness::ValidateOptions opt;
            opt.profile = harness::parse_profile(profile);
            opt.n_trials = n_trials > 0 ? n_trials : cfg.validation.n_trials;
            opt.master_seed = seed > 0 ? seed : cfg.validation.master_seed;
            const harness::Report rep = harness::run_validation(cfg, opt);
            write_out(val_out, harness::report_csv(rep));
            return rep.all_ok() ? 0 : 1;
        }
        if (*eval) return specfun_eval(fn, fn_args);
    } catch (const ConfigError& e) {
        std::cerr << "config error";
        if (e.line() > 0) std::cerr << " (line " << e.line() << ")";
        if (!e.field().empty()) std::cerr << " [" << e.field() << "]";
        std::cerr << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
