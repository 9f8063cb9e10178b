#pragma once

#include "risnoma/analytics.hpp"
#include "risnoma/channel.hpp"
#include "risnoma/errors.hpp"
#include "risnoma/geometry.hpp"
#include "risnoma/harness/config.hpp"
#include "risnoma/harness/sweep.hpp"
#include "risnoma/harness/validate.hpp"
#include "risnoma/params.hpp"
#include "risnoma/rng.hpp"
#include "risnoma/simulator.hpp"
#include "risnoma/specfun.hpp"
