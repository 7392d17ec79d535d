#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracspde/experiments/parallel.hpp"
#include "fracspde/experiments/statistics.hpp"
#include "fracspde/fbm/generate.hpp"
#include "fracspde/seeding.hpp"
#include "fracspde/solver/scheme.hpp"

namespace fracspde::experiments {

enum class StudyAxis { spatial, temporal };

inline std::string axis_name(StudyAxis a) { return a == StudyAxis::spatial ? "spatial" : "temporal"; }

/// Coupled-noise convergence study. Temporal: `ladder` and
/// `reference_resolution` are step counts M and `fixed_other` is N. Spatial:
/// they are mode counts N and `fixed_other` is M. The template's n_modes and
/// m_steps are ignored.
struct ConvergenceStudy {
    StudyAxis axis;
    std::vector<std::size_t> ladder;
    std::size_t reference_resolution;
    std::size_t fixed_other;
    std::size_t samples;
    std::uint64_t base_seed;
    SolverConfig problem;

    void validate() const {
        if (ladder.size() < 3) throw std::domain_error("study: ladder needs at least three resolutions");
        if (samples < 2) throw std::domain_error("study: need at least two samples");
        if (fixed_other == 0) throw std::domain_error("study: fixed resolution must be positive");
        for (std::size_t r : ladder) {
            if (r == 0 || r >= reference_resolution) {
                throw std::domain_error("study: reference must be strictly finer than every ladder entry");
            }
            if (axis == StudyAxis::temporal) {
                const bool pow2 = (r & (r - 1)) == 0 && (reference_resolution & (reference_resolution - 1)) == 0;
                if (!pow2 || reference_resolution % r != 0) {
                    throw std::domain_error("study: temporal ladder and reference must be dyadic");
                }
            }
        }
    }

    [[nodiscard]] double theoretical_slope() const {
        const double r = 2.0 * problem.hurst.value() + problem.noise.beta() - 1.0;
        // Spatial rate lambda_{N+1}^{-r/2} with lambda_N ~ N^2 reads as N^{-r}.
        return axis == StudyAxis::temporal ? 0.5 * r : r;
    }
};

struct ErrorReport {
    StudyAxis axis;
    std::vector<std::size_t> resolutions;
    std::vector<double> rms_errors;
    std::vector<double> std_errors;
    double fitted_slope = 0.0;  // decay order: error ~ resolution^{-slope}
    double slope_confidence_halfwidth = 0.0;
    double theoretical_slope = 0.0;
    bool monotone = true;  // errors decrease toward the reference
};

namespace detail {

inline double l2_distance(std::span<const double> fine, std::span<const double> coarse) {
    double acc = 0.0;
    for (std::size_t n = 0; n < fine.size(); ++n) {
        const double d = fine[n] - (n < coarse.size() ? coarse[n] : 0.0);
        acc += d * d;
    }
    return std::sqrt(acc);
}

inline ErrorReport summarise(const ConvergenceStudy& study, const std::vector<std::vector<double>>& per_sample) {
    ErrorReport report;
    report.axis = study.axis;
    report.resolutions = study.ladder;
    report.theoretical_slope = study.theoretical_slope();
    std::vector<double> column(study.samples);
    std::vector<double> xs;
    for (std::size_t r = 0; r < study.ladder.size(); ++r) {
        for (std::size_t s = 0; s < study.samples; ++s) column[s] = per_sample[s][r];
        const auto est = rms_error(column);
        report.rms_errors.push_back(est.rms);
        report.std_errors.push_back(est.std_error);
        xs.push_back(static_cast<double>(study.ladder[r]));
    }
    for (double e : report.rms_errors) {
        if (!(e > 0.0)) throw RunError("study produced a zero or non-finite RMS error; slope undefined");
    }
    const auto fit = fit_slope(xs, report.rms_errors);
    report.fitted_slope = -fit.slope;
    report.slope_confidence_halfwidth = fit.halfwidth;
    for (std::size_t r = 1; r < report.rms_errors.size(); ++r) {
        const bool finer = study.ladder[r] > study.ladder[r - 1];
        const bool decreased = report.rms_errors[r] < report.rms_errors[r - 1];
        if (finer != decreased) report.monotone = false;
    }
    return report;
}

inline RunError wrap_run_error(const std::exception& e, std::size_t sample, std::size_t resolution) {
    return RunError(std::string(e.what()) + " (sample " + std::to_string(sample) + ", resolution " +
                    std::to_string(resolution) + ")");
}

}  // namespace detail

/// Raw per-sample errors, [sample][ladder index].
inline std::vector<std::vector<double>> temporal_study_errors(const ConvergenceStudy& study, std::size_t workers) {
    study.validate();
    const std::size_t n = study.fixed_other;
    const SolverConfig base = study.problem.with_modes(n);
    const SolverConfig reference_cfg = base.with_steps(study.reference_resolution);
    reference_cfg.validate();
    std::vector<std::vector<double>> errors(study.samples, std::vector<double>(study.ladder.size()));
    parallel_for(study.samples, workers, [&](std::size_t s) {
        const std::uint64_t seed = derive_seed(study.base_seed, s);
        const auto fine = generate_cylindrical_fbm(n, reference_cfg.grid(), base.hurst, seed, base.fbm_method);
        SpectralState reference;
        try {
            reference = solve_endpoint(reference_cfg, fine);
        } catch (const RunError& e) {
            throw detail::wrap_run_error(e, s, study.reference_resolution);
        }
        for (std::size_t r = 0; r < study.ladder.size(); ++r) {
            const std::size_t m = study.ladder[r];
            const auto coarse_noise = aggregate_increments(fine, study.reference_resolution / m);
            try {
                const auto coarse = solve_endpoint(base.with_steps(m), coarse_noise);
                errors[s][r] = detail::l2_distance(reference.coeffs, coarse.coeffs);
            } catch (const RunError& e) {
                throw detail::wrap_run_error(e, s, m);
            }
        }
    });
    return errors;
}

inline std::vector<std::vector<double>> spatial_study_errors(const ConvergenceStudy& study, std::size_t workers) {
    study.validate();
    const std::size_t n_exact = study.reference_resolution;
    const SolverConfig reference_cfg = study.problem.with_modes(n_exact).with_steps(study.fixed_other);
    reference_cfg.validate();
    std::vector<std::vector<double>> errors(study.samples, std::vector<double>(study.ladder.size()));
    parallel_for(study.samples, workers, [&](std::size_t s) {
        const std::uint64_t seed = derive_seed(study.base_seed, s);
        const auto noise = generate_cylindrical_fbm(n_exact, reference_cfg.grid(), reference_cfg.hurst, seed,
                                                    reference_cfg.fbm_method);
        SpectralState reference;
        try {
            reference = solve_endpoint(reference_cfg, noise);
        } catch (const RunError& e) {
            throw detail::wrap_run_error(e, s, n_exact);
        }
        for (std::size_t r = 0; r < study.ladder.size(); ++r) {
            const std::size_t n = study.ladder[r];
            try {
                // Mode nesting: the coarse run reads the first n noise rows.
                const auto coarse = solve_endpoint(reference_cfg.with_modes(n), noise);
                errors[s][r] = detail::l2_distance(reference.coeffs, coarse.coeffs);
            } catch (const RunError& e) {
                throw detail::wrap_run_error(e, s, n);
            }
        }
    });
    return errors;
}

inline ErrorReport run_temporal_study(const ConvergenceStudy& study, std::size_t workers = 1) {
    if (study.axis != StudyAxis::temporal) throw std::domain_error("run_temporal_study: axis must be temporal");
    return detail::summarise(study, temporal_study_errors(study, workers));
}

inline ErrorReport run_spatial_study(const ConvergenceStudy& study, std::size_t workers = 1) {
    if (study.axis != StudyAxis::spatial) throw std::domain_error("run_spatial_study: axis must be spatial");
    return detail::summarise(study, spatial_study_errors(study, workers));
}

inline ErrorReport run_study(const ConvergenceStudy& study, std::size_t workers = 1) {
    return study.axis == StudyAxis::temporal ? run_temporal_study(study, workers)
                                             : run_spatial_study(study, workers);
}

/// Desk-scale temporal protocol: M_exact = 2^12, M in {2^6..2^10}, N = 2^6.
/// With paper_scale: M_exact = 2^14, M in {2^8..2^12}, N = 2^7, 100 samples.
inline ConvergenceStudy temporal_protocol(const SolverConfig& problem, bool paper_scale, std::size_t samples,
                                          std::uint64_t seed) {
    if (paper_scale) return {StudyAxis::temporal, {256, 512, 1024, 2048, 4096}, 16384, 128, samples, seed, problem};
    return {StudyAxis::temporal, {64, 128, 256, 512, 1024}, 4096, 64, samples, seed, problem};
}

/// Desk-scale spatial protocol: N_exact = 2^9, N in {2^1..2^5}, tau = 1/200.
/// With paper_scale: N_exact = 2^12.
inline ConvergenceStudy spatial_protocol(const SolverConfig& problem, bool paper_scale, std::size_t samples,
                                         std::uint64_t seed) {
    const auto m = static_cast<std::size_t>(std::lround(200.0 * problem.horizon));
    return {StudyAxis::spatial, {2, 4, 8, 16, 32}, paper_scale ? 4096u : 512u, m, samples, seed, problem};
}

}  // namespace fracspde::experiments
