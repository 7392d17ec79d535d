#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracspde/fbm/generate.hpp"
#include "fracspde/solver/config.hpp"
#include "fracspde/spectral/nemytskii.hpp"
#include "fracspde/spectral/operator.hpp"

namespace fracspde {

/// One step of the linear implicit Euler / spectral Galerkin scheme
///   x <- R(tau A_N) [x + tau P_N F(x) + P_N Phi dW],
/// with F frozen at the previous iterate. Owns its scratch buffers, so one
/// instance must not be shared between threads.
class ImplicitEulerStepper {
public:
    ImplicitEulerStepper(const SpectralOperator& op, double tau, NemytskiiMap f,
                         const DiagonalNoiseOperator& noise)
        : tau_(tau), f_(f), resolvent_(rational_step_factor(op, tau)),
          amplitudes_(noise.amplitudes()), drift_(op.size()), scratch_(op.size()) {
        if (noise.size() != op.size()) throw std::domain_error("stepper: noise/operator dimension mismatch");
    }

    [[nodiscard]] std::size_t size() const noexcept { return resolvent_.size(); }
    [[nodiscard]] double tau() const noexcept { return tau_; }

    /// dW(n) returns the increment driving 0-based mode n.
    template <class IncrementFn>
    void step_with(std::span<double> x, IncrementFn&& dw) {
        const std::size_t n = size();
        if (x.size() != n) throw std::domain_error("stepper: state dimension mismatch");
        const bool has_drift = !f_.is_zero();
        if (has_drift) apply_nemytskii(f_, x, drift_, scratch_);
        for (std::size_t i = 0; i < n; ++i) {
            double v = x[i];
            if (has_drift) v += tau_ * drift_[i];
            if (amplitudes_[i] != 0.0) v += amplitudes_[i] * dw(i);
            x[i] = resolvent_[i] * v;
        }
    }

    void step(std::span<double> x, std::span<const double> dw) {
        if (dw.size() != size()) throw std::domain_error("stepper: increment dimension mismatch");
        step_with(x, [&](std::size_t i) { return dw[i]; });
    }

    /// Step m of a cylindrical sample (uses its first size() rows).
    void step(std::span<double> x, const CylindricalFbmSample& w, std::size_t m) {
        const std::size_t steps = w.grid().steps();
        const auto data = w.data();
        step_with(x, [&](std::size_t i) { return data[i * steps + m]; });
    }

private:
    double tau_;
    NemytskiiMap f_;
    std::vector<double> resolvent_;
    std::vector<double> amplitudes_;
    std::vector<double> drift_;
    std::vector<double> scratch_;
};

inline SpectralState implicit_euler_step(const SpectralState& x, double tau, const SpectralOperator& op,
                                         const NemytskiiMap& f, const DiagonalNoiseOperator& noise,
                                         std::span<const double> dw) {
    if (!(tau > 0.0)) throw std::domain_error("implicit_euler_step: tau must be positive");
    if (x.size() != op.size() || dw.size() != op.size() || noise.size() != op.size()) {
        throw std::domain_error("implicit_euler_step: dimension mismatch");
    }
    ImplicitEulerStepper stepper(op, tau, f, noise);
    SpectralState y = x;
    stepper.step(y.coeffs, dw);
    y.time = x.time + tau;
    return y;
}

struct Trajectory {
    std::vector<SpectralState> states;  // t_0 .. t_M
    std::uint64_t config_digest = 0;
};

namespace detail {
inline void check_sample_matches(const SolverConfig& config, const CylindricalFbmSample& w) {
    if (w.modes() < config.n_modes) {
        throw std::domain_error("noise sample has " + std::to_string(w.modes()) + " modes, need " +
                                std::to_string(config.n_modes));
    }
    if (w.grid().steps() != config.m_steps) throw std::domain_error("noise sample step count mismatch");
    if (std::abs(w.grid().tau() - config.tau()) > 1e-12 * config.tau()) {
        throw std::domain_error("noise sample step size mismatch");
    }
    if (!(w.hurst() == config.hurst)) throw std::domain_error("noise sample Hurst index mismatch");
}

inline void check_finite(std::span<const double> x) {
    for (double v : x) {
        if (!std::isfinite(v)) throw RunError("non-finite state");
    }
}
}  // namespace detail

/// Runs all M steps and keeps every state.
inline Trajectory solve_path(const SolverConfig& config, const CylindricalFbmSample& w) {
    config.validate();
    detail::check_sample_matches(config, w);
    ImplicitEulerStepper stepper(config.op, config.tau(), config.nonlinearity, config.noise);
    Trajectory traj;
    traj.config_digest = config_digest(config);
    traj.states.reserve(config.m_steps + 1);
    SpectralState x = config.initial;
    x.time = 0.0;
    traj.states.push_back(x);
    for (std::size_t m = 0; m < config.m_steps; ++m) {
        stepper.step(x.coeffs, w, m);
        x.time = static_cast<double>(m + 1) * config.tau();
        traj.states.push_back(x);
    }
    detail::check_finite(x.coeffs);
    return traj;
}

/// Runs all M steps and returns only the state at the horizon. `observe`
/// is called as observe(m, coeffs) after every step m = 1..M.
template <class Observer>
SpectralState solve_endpoint(const SolverConfig& config, const CylindricalFbmSample& w, Observer&& observe) {
    config.validate();
    detail::check_sample_matches(config, w);
    ImplicitEulerStepper stepper(config.op, config.tau(), config.nonlinearity, config.noise);
    SpectralState x = config.initial;
    for (std::size_t m = 0; m < config.m_steps; ++m) {
        stepper.step(x.coeffs, w, m);
        observe(m + 1, std::span<const double>(x.coeffs));
    }
    x.time = config.horizon;
    detail::check_finite(x.coeffs);
    return x;
}

inline SpectralState solve_endpoint(const SolverConfig& config, const CylindricalFbmSample& w) {
    return solve_endpoint(config, w, [](std::size_t, std::span<const double>) {});
}

}  // namespace fracspde
