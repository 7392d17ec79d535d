#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fracspde/experiments/parallel.hpp"
#include "fracspde/experiments/statistics.hpp"
#include "fracspde/fbm/generate.hpp"
#include "fracspde/seeding.hpp"
#include "fracspde/solver/scheme.hpp"

namespace fracspde::verify {

/// Empirical temporal Hoelder exponent of t -> X(t) in L^2(Omega; V_delta).
struct RegularityReport {
    double delta;
    std::vector<double> lag_times;
    std::vector<double> rms_differences;
    double fitted_exponent;
    double theoretical_exponent;  // (2H + beta - 1 - delta) / 2
    std::size_t sample_count;
};

inline double fit_regularity_exponent(const std::vector<double>& lags, const std::vector<double>& rms) {
    return experiments::fit_slope(lags, rms).slope;
}

/// RMS of ||X(T) - X(T - lag)||_delta over Monte Carlo samples, lags given in
/// steps. Sample s is driven by derive_seed(config.base_seed, s).
inline RegularityReport estimate_time_regularity(const SolverConfig& config, double delta,
                                                 const std::vector<std::size_t>& lag_steps, std::size_t samples,
                                                 std::size_t workers = 1) {
    config.validate();
    const double order = 2.0 * config.hurst.value() + config.noise.beta() - 1.0;
    if (delta < 0.0 || delta >= order) throw std::domain_error("estimate_time_regularity: delta out of range");
    if (lag_steps.size() < 3) throw std::domain_error("estimate_time_regularity: need at least three lags");
    for (std::size_t i = 0; i < lag_steps.size(); ++i) {
        if (lag_steps[i] == 0 || lag_steps[i] >= config.m_steps) {
            throw std::domain_error("estimate_time_regularity: lag outside the trajectory");
        }
        if (i > 0 && lag_steps[i] <= lag_steps[i - 1]) {
            throw std::domain_error("estimate_time_regularity: lags must be strictly increasing");
        }
    }
    const std::size_t n_lags = lag_steps.size();
    std::vector<std::vector<double>> diffs(samples, std::vector<double>(n_lags));
    experiments::parallel_for(samples, workers, [&](std::size_t s) {
        const auto w = generate_cylindrical_fbm(config.n_modes, config.grid(), config.hurst,
                                                derive_seed(config.base_seed, s), config.fbm_method);
        std::vector<SpectralState> earlier(n_lags);
        const auto end = solve_endpoint(config, w, [&](std::size_t m, std::span<const double> x) {
            for (std::size_t l = 0; l < n_lags; ++l) {
                if (m == config.m_steps - lag_steps[l]) earlier[l].coeffs.assign(x.begin(), x.end());
            }
        });
        for (std::size_t l = 0; l < n_lags; ++l) {
            SpectralState d{end.coeffs, 0.0};
            for (std::size_t n = 0; n < d.size(); ++n) d.coeffs[n] -= earlier[l].coeffs[n];
            diffs[s][l] = sobolev_norm(config.op, delta, d);
        }
    });
    RegularityReport report{delta, {}, {}, 0.0, 0.5 * (order - delta), samples};
    std::vector<double> column(samples);
    for (std::size_t l = 0; l < n_lags; ++l) {
        for (std::size_t s = 0; s < samples; ++s) column[s] = diffs[s][l];
        report.lag_times.push_back(static_cast<double>(lag_steps[l]) * config.tau());
        report.rms_differences.push_back(experiments::rms_error(column).rms);
    }
    report.fitted_exponent = fit_regularity_exponent(report.lag_times, report.rms_differences);
    return report;
}

/// Sobolev-norm ladder for one delta.
struct SobolevLadder {
    double delta;
    std::vector<double> rms_norms;      // RMS ||X^N(T)||_delta per ladder entry
    std::vector<double> block_energy;   // E sum_{N_prev < n <= N} lambda_n^delta X_n^2, from entry 1 on
    double growth_exponent;             // OLS slope of log(block_energy) vs log(N); -inf if some block is empty
    bool bounded;                       // growth_exponent < 0
};

struct SpaceRegularityReport {
    std::vector<std::size_t> ladder;
    std::vector<std::size_t> steps;     // time steps used at each ladder entry
    std::vector<SobolevLadder> probes;
    double threshold;                   // 2H + beta - 1
    std::size_t sample_count;
};

/// Runs the scheme at every N in `ladder` (dyadic) with tau_N proportional to
/// N^{-2}, so tau_N lambda_N is the same at every level; `config` supplies the
/// finest level (n_modes = ladder.back(), m_steps for that level). Noise is
/// coupled by mode nesting and increment aggregation.
inline SpaceRegularityReport estimate_space_regularity(const SolverConfig& config, const std::vector<double>& deltas,
                                                       const std::vector<std::size_t>& ladder, std::size_t samples,
                                                       std::size_t workers = 1) {
    config.validate();
    if (ladder.size() < 4) throw std::domain_error("estimate_space_regularity: need at least four ladder entries");
    if (ladder.back() != config.n_modes) {
        throw std::domain_error("estimate_space_regularity: config must be the finest ladder level");
    }
    std::vector<std::size_t> steps;
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        if (i > 0 && ladder[i] <= ladder[i - 1]) throw std::domain_error("estimate_space_regularity: ladder not increasing");
        if (config.n_modes % ladder[i] != 0) throw std::domain_error("estimate_space_regularity: ladder not nested");
        const std::size_t r = config.n_modes / ladder[i];
        if (config.m_steps % (r * r) != 0) {
            throw std::domain_error("estimate_space_regularity: step count not divisible along the ladder");
        }
        steps.push_back(config.m_steps / (r * r));
    }
    const std::size_t levels = ladder.size();
    const std::size_t nd = deltas.size();
    // [sample][delta][level] -> (squared norm, squared top-block norm)
    std::vector<std::vector<std::vector<double>>> norm2(samples, std::vector<std::vector<double>>(nd, std::vector<double>(levels)));
    auto block2 = norm2;
    experiments::parallel_for(samples, workers, [&](std::size_t s) {
        const auto fine = generate_cylindrical_fbm(config.n_modes, config.grid(), config.hurst,
                                                   derive_seed(config.base_seed, s), config.fbm_method);
        for (std::size_t l = 0; l < levels; ++l) {
            const std::size_t n = ladder[l];
            const auto cfg = config.with_modes(n).with_steps(steps[l]);
            const auto noise = aggregate_increments(fine, config.m_steps / steps[l], n);
            const auto x = solve_endpoint(cfg, noise);
            const std::size_t lo = l == 0 ? 0 : ladder[l - 1];
            for (std::size_t d = 0; d < nd; ++d) {
                double full = 0.0;
                double block = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double v = std::pow(cfg.op.eigenvalues()[k], deltas[d]) * x.coeffs[k] * x.coeffs[k];
                    full += v;
                    if (k >= lo) block += v;
                }
                norm2[s][d][l] = full;
                block2[s][d][l] = block;
            }
        }
    });
    SpaceRegularityReport report{ladder, steps, {}, 2.0 * config.hurst.value() + config.noise.beta() - 1.0, samples};
    for (std::size_t d = 0; d < nd; ++d) {
        SobolevLadder probe{deltas[d], {}, {}, 0.0, false};
        std::vector<double> xs;
        for (std::size_t l = 0; l < levels; ++l) {
            double mean_norm = 0.0;
            double mean_block = 0.0;
            for (std::size_t s = 0; s < samples; ++s) {
                mean_norm += norm2[s][d][l];
                mean_block += block2[s][d][l];
            }
            probe.rms_norms.push_back(std::sqrt(mean_norm / static_cast<double>(samples)));
            if (l > 0) {
                probe.block_energy.push_back(mean_block / static_cast<double>(samples));
                xs.push_back(static_cast<double>(ladder[l]));
            }
        }
        const bool any_energy = std::all_of(probe.block_energy.begin(), probe.block_energy.end(),
                                            [](double e) { return e > 0.0; });
        if (any_energy) {
            probe.growth_exponent = experiments::fit_slope(xs, probe.block_energy).slope;
            probe.bounded = probe.growth_exponent < 0.0;
        } else {
            // no energy above the first level (e.g. noise-free runs)
            probe.growth_exponent = -std::numeric_limits<double>::infinity();
            probe.bounded = true;
        }
        report.probes.push_back(std::move(probe));
    }
    return report;
}

}  // namespace fracspde::verify
