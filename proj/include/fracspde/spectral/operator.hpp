#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracspde/fbm/hurst.hpp"

namespace fracspde {

/// Solution coefficients <X, e_n>, n = 1..N, at a fixed time.
struct SpectralState {
    std::vector<double> coeffs;
    double time = 0.0;

    [[nodiscard]] std::size_t size() const noexcept { return coeffs.size(); }
};

/// Self-adjoint positive operator given by its eigenvalues in a fixed
/// orthonormal basis. An optional formula extends the spectrum beyond the
/// stored truncation (needed for tail sums).
class SpectralOperator {
public:
    using EigenFormula = std::function<double(std::size_t)>;  // 1-based index

    SpectralOperator(std::vector<double> eigenvalues, std::string description,
                     EigenFormula formula = nullptr)
        : eigenvalues_(std::move(eigenvalues)), description_(std::move(description)),
          formula_(std::move(formula)) {
        if (eigenvalues_.empty()) throw std::domain_error("spectral operator needs at least one mode");
        if (!(eigenvalues_.front() > 0.0)) throw std::domain_error("eigenvalues must be positive");
        for (std::size_t i = 1; i < eigenvalues_.size(); ++i) {
            if (eigenvalues_[i] < eigenvalues_[i - 1]) {
                throw std::domain_error("eigenvalues must be nondecreasing");
            }
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return eigenvalues_.size(); }
    [[nodiscard]] const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }
    [[nodiscard]] const std::string& description() const noexcept { return description_; }
    [[nodiscard]] bool extendable() const noexcept { return static_cast<bool>(formula_); }

    /// lambda_n for 1-based n, using the formula past the stored range.
    [[nodiscard]] double eigenvalue(std::size_t n) const {
        if (n == 0) throw std::domain_error("eigenvalue index is 1-based");
        if (n <= eigenvalues_.size()) return eigenvalues_[n - 1];
        if (!formula_) throw std::domain_error("operator " + description_ + " has no eigenvalue extension");
        return formula_(n);
    }

    /// Same operator restricted to its first n modes.
    [[nodiscard]] SpectralOperator truncated(std::size_t n) const {
        if (n == 0 || (n > eigenvalues_.size() && !formula_)) {
            throw std::domain_error("cannot truncate operator to " + std::to_string(n) + " modes");
        }
        std::vector<double> ev(n);
        for (std::size_t i = 0; i < n; ++i) ev[i] = eigenvalue(i + 1);
        return {std::move(ev), description_, formula_};
    }

private:
    std::vector<double> eigenvalues_;
    std::string description_;
    EigenFormula formula_;
};

/// Dirichlet Laplacian -d^2/dx^2 on (0, 1): lambda_n = n^2 pi^2,
/// e_n(x) = sqrt(2) sin(n pi x).
inline SpectralOperator dirichlet_laplacian(std::size_t n_modes) {
    if (n_modes == 0) throw std::domain_error("dirichlet_laplacian: N must be >= 1");
    auto formula = [](std::size_t n) {
        const double k = static_cast<double>(n) * std::numbers::pi;
        return k * k;
    };
    std::vector<double> ev(n_modes);
    for (std::size_t n = 1; n <= n_modes; ++n) ev[n - 1] = formula(n);
    return {std::move(ev), "dirichlet-laplacian-(0,1)", formula};
}

enum class NoiseKind { identity, trace_class_logsq, custom };

inline std::string noise_kind_name(NoiseKind k) {
    switch (k) {
        case NoiseKind::identity: return "identity";
        case NoiseKind::trace_class_logsq: return "trace_class_logsq";
        case NoiseKind::custom: return "custom";
    }
    return "custom";
}

/// Phi = Q^{1/2}, diagonal in the eigenbasis, with regularity exponent beta
/// such that ||A^{(beta-1)/2} Phi||_{L2} < infinity.
class DiagonalNoiseOperator {
public:
    static DiagonalNoiseOperator identity(std::size_t n_modes) {
        // beta < 1/2 for Q = I in one dimension; 1/2 is stored as the supremum.
        return {NoiseKind::identity, std::vector<double>(n_modes, 1.0), 0.5};
    }

    /// Q e_1 = 0, Q e_i = 1 / (i log(i)^2) for i >= 2; trace class, beta = 1.
    static DiagonalNoiseOperator trace_class_logsq(std::size_t n_modes) {
        std::vector<double> amp(n_modes);
        for (std::size_t n = 1; n <= n_modes; ++n) amp[n - 1] = logsq_amplitude(n);
        return {NoiseKind::trace_class_logsq, std::move(amp), 1.0};
    }

    static DiagonalNoiseOperator custom(std::vector<double> amplitudes, double beta) {
        return {NoiseKind::custom, std::move(amplitudes), beta};
    }

    static DiagonalNoiseOperator zero(std::size_t n_modes) {
        return custom(std::vector<double>(n_modes, 0.0), 1.0);
    }

    [[nodiscard]] NoiseKind kind() const noexcept { return kind_; }
    [[nodiscard]] double beta() const noexcept { return beta_; }
    [[nodiscard]] const std::vector<double>& amplitudes() const noexcept { return amplitudes_; }
    [[nodiscard]] std::size_t size() const noexcept { return amplitudes_.size(); }

    /// phi_n for 1-based n; built-in kinds extend past the stored range.
    [[nodiscard]] double amplitude(std::size_t n) const {
        if (n == 0) throw std::domain_error("noise amplitude index is 1-based");
        if (n <= amplitudes_.size()) return amplitudes_[n - 1];
        switch (kind_) {
            case NoiseKind::identity: return 1.0;
            case NoiseKind::trace_class_logsq: return logsq_amplitude(n);
            case NoiseKind::custom: break;
        }
        throw std::domain_error("custom noise operator has no amplitude beyond its stored modes");
    }

    [[nodiscard]] DiagonalNoiseOperator truncated(std::size_t n) const {
        std::vector<double> amp(n);
        for (std::size_t i = 0; i < n; ++i) amp[i] = amplitude(i + 1);
        return {kind_, std::move(amp), beta_};
    }

    /// beta must lie in (1 - 2H, 1].
    void validate(const HurstParameter& h) const {
        if (!(beta_ > 1.0 - 2.0 * h.value() && beta_ <= 1.0)) {
            throw std::domain_error("noise beta must lie in (1 - 2H, 1]");
        }
    }

    [[nodiscard]] bool is_zero() const noexcept {
        for (double a : amplitudes_) {
            if (a != 0.0) return false;
        }
        return true;
    }

    static double logsq_amplitude(std::size_t n) {
        if (n < 2) return 0.0;
        const double x = static_cast<double>(n);
        const double l = std::log(x);
        return 1.0 / std::sqrt(x * l * l);
    }

private:
    DiagonalNoiseOperator(NoiseKind kind, std::vector<double> amplitudes, double beta)
        : kind_(kind), amplitudes_(std::move(amplitudes)), beta_(beta) {
        for (double a : amplitudes_) {
            if (!(a >= 0.0)) throw std::domain_error("noise amplitudes must be nonnegative");
        }
        if (!(beta_ <= 1.0)) throw std::domain_error("noise beta must be <= 1");
    }

    NoiseKind kind_;
    std::vector<double> amplitudes_;
    double beta_;
};

namespace detail {
inline void require_same_size(const SpectralOperator& op, const SpectralState& x, const char* what) {
    if (op.size() != x.size()) throw std::domain_error(std::string(what) + ": dimension mismatch");
}
}  // namespace detail

/// E(t) x = sum_n e^{-lambda_n t} x_n e_n.
inline SpectralState semigroup_apply(const SpectralOperator& op, double t, const SpectralState& x) {
    if (t < 0.0) throw std::domain_error("semigroup_apply: negative time");
    detail::require_same_size(op, x, "semigroup_apply");
    SpectralState y = x;
    if (t == 0.0) return y;
    const auto& ev = op.eigenvalues();
    for (std::size_t n = 0; n < y.size(); ++n) y.coeffs[n] *= std::exp(-ev[n] * t);
    return y;
}

/// A^gamma x = sum_n lambda_n^gamma x_n e_n.
inline SpectralState fractional_power_apply(const SpectralOperator& op, double gamma, const SpectralState& x) {
    detail::require_same_size(op, x, "fractional_power_apply");
    SpectralState y = x;
    if (gamma == 0.0) return y;
    const auto& ev = op.eigenvalues();
    for (std::size_t n = 0; n < y.size(); ++n) y.coeffs[n] *= std::pow(ev[n], gamma);
    return y;
}

/// Per-mode multipliers of R(tau A) = (I + tau A)^{-1}.
inline std::vector<double> rational_step_factor(const SpectralOperator& op, double tau) {
    if (!(tau > 0.0)) throw std::domain_error("rational_step_factor: tau must be positive");
    const auto& ev = op.eigenvalues();
    std::vector<double> r(ev.size());
    for (std::size_t n = 0; n < ev.size(); ++n) r[n] = 1.0 / (1.0 + tau * ev[n]);
    return r;
}

/// P_N: keeps the first n_target coefficients.
inline SpectralState projection_truncate(const SpectralState& x, std::size_t n_target) {
    if (n_target > x.size()) throw std::domain_error("projection_truncate: target exceeds length");
    return {{x.coeffs.begin(), x.coeffs.begin() + static_cast<std::ptrdiff_t>(n_target)}, x.time};
}

inline double l2_norm(const SpectralState& x) {
    double acc = 0.0;
    for (double c : x.coeffs) acc += c * c;
    return std::sqrt(acc);
}

/// ||x||_delta = ||A^{delta/2} x||.
inline double sobolev_norm(const SpectralOperator& op, double delta, const SpectralState& x) {
    detail::require_same_size(op, x, "sobolev_norm");
    if (delta == 0.0) return l2_norm(x);
    const auto& ev = op.eigenvalues();
    double acc = 0.0;
    for (std::size_t n = 0; n < x.size(); ++n) {
        const double v = std::pow(ev[n], 0.5 * delta) * x.coeffs[n];
        acc += v * v;
    }
    return std::sqrt(acc);
}

/// Partial sum of ||A^{(beta-1)/2} Phi||_{L2}^2 = sum_{n <= k_max} lambda_n^{beta-1} phi_n^2.
inline double noise_regularity_sum(const SpectralOperator& op, const DiagonalNoiseOperator& phi, double beta,
                                   std::size_t k_max) {
    if (k_max == 0) throw std::domain_error("noise_regularity_sum: k_max must be >= 1");
    double acc = 0.0;
    for (std::size_t n = 1; n <= k_max; ++n) {
        const double a = phi.amplitude(n);
        if (a == 0.0) continue;
        acc += std::pow(op.eigenvalue(n), beta - 1.0) * a * a;
    }
    return acc;
}

}  // namespace fracspde
