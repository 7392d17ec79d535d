#pragma once

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/normal.hpp>
#include <json.hpp>

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "fracspde/experiments/parallel.hpp"
#include "fracspde/experiments/presets.hpp"
#include "fracspde/fbm/covariance.hpp"
#include "fracspde/fbm/generate.hpp"
#include "fracspde/seeding.hpp"
#include "fracspde/verify/checks.hpp"
#include "fracspde/verify/regularity.hpp"

namespace fracspde::verify {

struct CheckLine {
    std::string name;
    bool passed;
    std::string detail;
    nlohmann::ordered_json data;
};

struct SuiteResult {
    std::string suite;
    std::vector<CheckLine> checks;

    [[nodiscard]] bool passed() const {
        for (const auto& c : checks) {
            if (!c.passed) return false;
        }
        return true;
    }
};

inline nlohmann::ordered_json to_json(const SuiteResult& r) {
    nlohmann::ordered_json j;
    j["suite"] = r.suite;
    j["passed"] = r.passed();
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : r.checks) {
        j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}, {"data", c.data}});
    }
    return j;
}

namespace detail {
inline std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}
}  // namespace detail

// ---- fBm sample covariance -------------------------------------------------

struct CovarianceCheck {
    std::size_t entries;
    std::size_t exceed_3se;  // entries with |z| > 3
    std::size_t allowed;     // 99.9% binomial quantile of the count under exactness
    double max_abs_z;
    bool passed;
};

/// Sample second moments of `samples` paths of `steps` increments over [0, 1]
/// against the analytic covariance. Each entry gets z = (C_hat - C) / SE with
/// SE^2 = (C_ii C_jj + C_ij^2) / n. Entries are not independent, so the count
/// of 3-sigma exceedances is compared with its binomial 99.9% quantile.
inline CovarianceCheck check_fbm_covariance(std::size_t steps, const HurstParameter& h, std::size_t samples,
                                            std::uint64_t seed, FbmMethod method, std::size_t workers = 1) {
    const auto grid = IncrementGrid::over(1.0, steps);
    const std::size_t tri = steps * (steps + 1) / 2;
    constexpr std::size_t chunks = 64;
    std::vector<std::vector<double>> partial(chunks, std::vector<double>(tri, 0.0));
    experiments::parallel_for(chunks, workers, [&](std::size_t c) {
        std::vector<double> x(steps);
        auto& acc = partial[c];
        for (std::size_t s = c; s < samples; s += chunks) {
            fill_fbm_increments(x, grid, h, derive_seed(seed, s), method);
            std::size_t idx = 0;
            for (std::size_t i = 0; i < steps; ++i) {
                for (std::size_t j = i; j < steps; ++j) acc[idx++] += x[i] * x[j];
            }
        }
    });
    std::vector<double> total(tri, 0.0);
    for (const auto& p : partial) {
        for (std::size_t k = 0; k < tri; ++k) total[k] += p[k];
    }
    const double n = static_cast<double>(samples);
    const double c0 = increment_covariance(0, 0, grid, h);
    CovarianceCheck out{tri, 0, 0, 0.0, false};
    std::size_t idx = 0;
    for (std::size_t i = 0; i < steps; ++i) {
        for (std::size_t j = i; j < steps; ++j) {
            const double exact = increment_covariance(i, j, grid, h);
            const double se = std::sqrt((c0 * c0 + exact * exact) / n);
            const double z = std::abs(total[idx++] / n - exact) / se;
            if (z > 3.0) ++out.exceed_3se;
            out.max_abs_z = std::max(out.max_abs_z, z);
        }
    }
    const boost::math::normal_distribution<> normal;
    const double p = 2.0 * boost::math::cdf(boost::math::complement(normal, 3.0));
    const boost::math::binomial_distribution<> binom(static_cast<double>(tri), p);
    out.allowed = static_cast<std::size_t>(boost::math::quantile(binom, 0.999));
    out.passed = out.exceed_3se <= out.allowed;
    return out;
}

// ---- suites -----------------------------------------------------------------

/// Closed-form phi cell integrals against quadrature for offsets 1..10 and
/// H in {0.55, 0.75, 0.95}: relative agreement 1e-6 off the diagonal, value 1
/// on it, and the 1/2 max(i, j)^{2H-1} bound.
inline SuiteResult phi_suite() {
    SuiteResult r{"phi", {}};
    for (double hv : {0.55, 0.75, 0.95}) {
        const HurstParameter h(hv);
        {
            const auto c = check_phi_cell_integral(3, 3, h);
            const bool ok = c.analytic == 1.0 && std::abs(c.quadrature - 1.0) <= 1e-6;
            r.checks.push_back({detail::fmt("diagonal H=%.2f", hv), ok,
                                detail::fmt("analytic %.17g quadrature %.17g", c.analytic, c.quadrature),
                                {{"hurst", hv}, {"analytic", c.analytic}, {"quadrature", c.quadrature}}});
        }
        for (std::size_t k = 1; k <= 10; ++k) {
            const auto c = check_phi_cell_integral(1 + k, 1, h);
            const double rel = std::abs(c.analytic - c.quadrature) / std::abs(c.analytic);
            const bool ok = rel <= 1e-6 && c.bound_holds;
            r.checks.push_back(
                {detail::fmt("offset %.0f H=%.2f", static_cast<double>(k), hv), ok,
                 detail::fmt("analytic %.12g quadrature %.12g rel %.2e bound %.6g", c.analytic, c.quadrature, rel,
                             c.bound),
                 {{"hurst", hv},
                  {"offset", k},
                  {"analytic", c.analytic},
                  {"quadrature", c.quadrature},
                  {"relative_error", rel},
                  {"bound", c.bound}}});
        }
    }
    return r;
}

/// lambda^{2H+k1+k2} int int u^k1 v^k2 e^{-lambda(u+v)} phi(u-v) over [0,1]^2
/// must not increase by more than a factor 2 between consecutive lambda.
inline SuiteResult lambda_phi_suite() {
    SuiteResult r{"lambda-phi", {}};
    const HurstParameter h(0.75);
    const double lambdas[] = {1e1, 1e2, 1e3, 1e4};
    for (int k1 : {0, 1}) {
        for (int k2 : {0, 1}) {
            std::vector<double> values;
            for (double l : lambdas) values.push_back(check_lambda_phi_bound(l, 1.0, k1, k2, h));
            bool ok = true;
            for (std::size_t i = 1; i < values.size(); ++i) ok = ok && values[i] <= 2.0 * values[i - 1];
            r.checks.push_back({"kappa=(" + std::to_string(k1) + "," + std::to_string(k2) + ")", ok,
                                detail::fmt("scaled integrals %.6g %.6g %.6g %.6g", values[0], values[1], values[2],
                                            values[3]),
                                {{"lambda", lambdas}, {"scaled_integral", values}}});
        }
    }
    return r;
}

/// Five random step integrands (3 x 4 blocks on 8 steps over [0, 1]); the
/// Monte Carlo second moment must sit within 3 standard errors of the
/// analytic value.
inline SuiteResult isometry_suite(std::size_t samples, std::uint64_t seed, std::size_t workers = 1) {
    SuiteResult r{"isometry", {}};
    const HurstParameter h(0.75);
    const auto grid = IncrementGrid::over(1.0, 8);
    for (std::size_t c = 0; c < 5; ++c) {
        std::mt19937_64 rng(derive_seed(seed, 1000 + c));
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        std::vector<Eigen::MatrixXd> psi(grid.steps(), Eigen::MatrixXd(3, 4));
        for (auto& block : psi) {
            for (Eigen::Index i = 0; i < block.rows(); ++i) {
                for (Eigen::Index j = 0; j < block.cols(); ++j) block(i, j) = unif(rng);
            }
        }
        const auto res = check_ito_isometry(psi, grid, h, samples, derive_seed(seed, c), FbmMethod::circulant, workers);
        const double z = std::abs(res.mc_lhs - res.analytic_rhs) / res.std_error;
        r.checks.push_back({"integrand " + std::to_string(c), z <= 3.0,
                            detail::fmt("mc %.8g analytic %.8g se %.3g z %.2f", res.mc_lhs, res.analytic_rhs,
                                        res.std_error, z),
                            {{"mc_lhs", res.mc_lhs},
                             {"analytic_rhs", res.analytic_rhs},
                             {"std_error", res.std_error},
                             {"samples", samples}}});
    }
    return r;
}

/// Trajectory resolution used for the temporal Hoelder probe.
struct TimeRegularityProtocol {
    std::size_t modes = 128;
    std::size_t steps = 65536;
    double horizon = 1.0;
    std::vector<std::size_t> lags{8, 16, 32, 64, 128};
};

/// Ladder for the Sobolev-norm probe: tau_N shrinks like N^{-2}.
struct SpaceRegularityProtocol {
    std::vector<std::size_t> ladder{8, 16, 32, 64, 128};
    std::size_t top_steps = 16384;
    double horizon = 1.0 / 64.0;
};

inline RegularityReport preset_time_regularity(const std::string& preset, std::size_t samples, std::uint64_t seed,
                                               std::size_t workers, const TimeRegularityProtocol& p = {}) {
    const auto cfg = experiments::she_preset(preset, p.modes, p.steps, p.horizon, seed);
    return estimate_time_regularity(cfg, 0.0, p.lags, samples, workers);
}

inline SpaceRegularityReport preset_space_regularity(const std::string& preset, std::size_t samples,
                                                     std::uint64_t seed, std::size_t workers,
                                                     const SpaceRegularityProtocol& p = {}) {
    const auto cfg = experiments::she_preset(preset, p.ladder.back(), p.top_steps, p.horizon, seed);
    const double threshold = 2.0 * cfg.hurst.value() + cfg.noise.beta() - 1.0;
    return estimate_space_regularity(cfg, {threshold - 0.1, threshold + 0.1}, p.ladder, samples, workers);
}

inline nlohmann::ordered_json to_json(const RegularityReport& r) {
    return {{"delta", r.delta},
            {"lag_times", r.lag_times},
            {"rms_differences", r.rms_differences},
            {"fitted_exponent", r.fitted_exponent},
            {"theoretical_exponent", r.theoretical_exponent},
            {"samples", r.sample_count}};
}

inline nlohmann::ordered_json to_json(const SpaceRegularityReport& r) {
    nlohmann::ordered_json j{{"ladder", r.ladder}, {"steps", r.steps}, {"threshold", r.threshold},
                             {"samples", r.sample_count}};
    j["probes"] = nlohmann::ordered_json::array();
    for (const auto& p : r.probes) {
        j["probes"].push_back({{"delta", p.delta},
                               {"rms_norms", p.rms_norms},
                               {"block_energy", p.block_energy},
                               {"growth_exponent", p.growth_exponent},
                               {"bounded", p.bounded}});
    }
    return j;
}

/// Temporal exponent within 0.1 of (2H + beta - 1)/2 and the Sobolev ladder
/// bounded just below 2H + beta - 1, growing just above it, for both presets.
inline SuiteResult regularity_suite(std::size_t samples, std::uint64_t seed, std::size_t workers = 1) {
    SuiteResult r{"regularity", {}};
    for (const std::string preset : {"she-trace", "she-identity"}) {
        const auto t = preset_time_regularity(preset, samples, seed, workers);
        const bool t_ok = std::abs(t.fitted_exponent - t.theoretical_exponent) <= 0.1;
        r.checks.push_back({preset + " time exponent", t_ok,
                            detail::fmt("fitted %.4f expected %.4f +- 0.1", t.fitted_exponent,
                                        t.theoretical_exponent),
                            to_json(t)});
        const auto s = preset_space_regularity(preset, samples, seed, workers);
        const auto& below = s.probes[0];
        const auto& above = s.probes[1];
        r.checks.push_back({preset + " sobolev bounded below threshold", below.bounded,
                            detail::fmt("delta %.2f block-energy growth exponent %.4f (needs < 0)", below.delta,
                                        below.growth_exponent),
                            to_json(s)});
        r.checks.push_back({preset + " sobolev grows above threshold", !above.bounded,
                            detail::fmt("delta %.2f block-energy growth exponent %.4f (needs >= 0)", above.delta,
                                        above.growth_exponent),
                            nlohmann::ordered_json{{"threshold", s.threshold}}});
    }
    return r;
}

}  // namespace fracspde::verify
