#pragma once

#include "fracspde/experiments/parallel.hpp"
#include "fracspde/experiments/presets.hpp"
#include "fracspde/experiments/report_io.hpp"
#include "fracspde/experiments/statistics.hpp"
#include "fracspde/experiments/study.hpp"
#include "fracspde/fbm/covariance.hpp"
#include "fracspde/fbm/generate.hpp"
#include "fracspde/fbm/hurst.hpp"
#include "fracspde/seeding.hpp"
#include "fracspde/solver/config.hpp"
#include "fracspde/solver/reference.hpp"
#include "fracspde/solver/scheme.hpp"
#include "fracspde/spectral/nemytskii.hpp"
#include "fracspde/spectral/operator.hpp"
#include "fracspde/spectral/transform.hpp"
#include "fracspde/verify/checks.hpp"
#include "fracspde/verify/quadrature.hpp"
#include "fracspde/verify/regularity.hpp"
#include "fracspde/verify/suites.hpp"

namespace fracspde {
inline constexpr const char* version = "0.1.0";
}
