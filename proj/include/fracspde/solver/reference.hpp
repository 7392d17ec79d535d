#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fracspde/fbm/generate.hpp"
#include "fracspde/solver/config.hpp"
#include "fracspde/spectral/operator.hpp"

namespace fracspde {

/// Left-endpoint discretisation of the stochastic convolution
///   O_t = int_0^t E(t - s) Phi dW^H(s),   t = t_index * tau,
/// coefficient n = phi_n sum_{j < t_index} e^{-lambda_n (t - s_j)} dw_{n,j}.
inline SpectralState stochastic_convolution(const SpectralOperator& op, const DiagonalNoiseOperator& noise,
                                            const CylindricalFbmSample& w, std::size_t t_index) {
    const auto& grid = w.grid();
    if (t_index > grid.steps()) throw std::domain_error("stochastic_convolution: t_index out of range");
    if (noise.size() != op.size()) throw std::domain_error("stochastic_convolution: dimension mismatch");
    if (w.modes() < op.size()) throw std::domain_error("stochastic_convolution: not enough noise modes");
    const double t = grid.time(t_index);
    SpectralState out{std::vector<double>(op.size(), 0.0), t};
    for (std::size_t n = 0; n < op.size(); ++n) {
        const double phi = noise.amplitudes()[n];
        if (phi == 0.0) continue;
        const double lam = op.eigenvalues()[n];
        const auto row = w.row(n);
        // Horner form of sum_j q^{t_index - j} dw_j with q = e^{-lambda tau}.
        const double q = std::exp(-lam * grid.tau());
        double acc = 0.0;
        for (std::size_t j = 0; j < t_index; ++j) acc = (acc + row[j]) * q;
        out.coeffs[n] = phi * acc;
    }
    return out;
}

/// Linear (F = 0) mild solution at the horizon, with the convolution
/// evaluated on `fine`, a grid refining the config grid by an integer factor:
///   X_n(T) = e^{-lambda_n T} xi_n + phi_n sum_j e^{-lambda_n (T - s_j)} dw_{n,j}.
inline SpectralState linear_mild_reference(const SolverConfig& config, const CylindricalFbmSample& fine) {
    config.validate();
    if (!config.nonlinearity.is_zero()) {
        throw std::domain_error("linear_mild_reference: requires F = 0");
    }
    const std::size_t fine_steps = fine.grid().steps();
    if (fine_steps % config.m_steps != 0) {
        throw std::domain_error("linear_mild_reference: fine grid is not a refinement of the config grid");
    }
    const double ratio = static_cast<double>(fine_steps / config.m_steps);
    if (std::abs(fine.grid().tau() * ratio - config.tau()) > 1e-12 * config.tau()) {
        throw std::domain_error("linear_mild_reference: fine step size mismatch");
    }
    if (fine.modes() < config.n_modes) throw std::domain_error("linear_mild_reference: not enough noise modes");
    if (!(fine.hurst() == config.hurst)) throw std::domain_error("linear_mild_reference: Hurst index mismatch");

    SpectralState conv = stochastic_convolution(config.op, config.noise, fine, fine_steps);
    const double horizon = fine.grid().time(fine_steps);
    for (std::size_t n = 0; n < config.n_modes; ++n) {
        conv.coeffs[n] += std::exp(-config.op.eigenvalues()[n] * horizon) * config.initial.coeffs[n];
    }
    conv.time = config.horizon;
    return conv;
}

}  // namespace fracspde
