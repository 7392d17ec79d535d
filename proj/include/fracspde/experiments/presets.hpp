#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fracspde/solver/config.hpp"

namespace fracspde::experiments {

/// Stochastic heat equation u_t = u_xx + sin(u) + Q^{1/2} dW^H/dt on (0, 1)
/// with u(0, x) = sin(pi x), homogeneous Dirichlet data and H = 3/4.
///   she-identity: Q = I
///   she-trace:    Q e_1 = 0, Q e_i = 1 / (i log(i)^2)
inline SolverConfig she_preset(std::string_view name, std::size_t n_modes, std::size_t m_steps,
                               double horizon = 1.0, std::uint64_t seed = 0,
                               FbmMethod method = FbmMethod::circulant) {
    DiagonalNoiseOperator noise = [&] {
        if (name == "she-identity") return DiagonalNoiseOperator::identity(n_modes);
        if (name == "she-trace") return DiagonalNoiseOperator::trace_class_logsq(n_modes);
        throw std::invalid_argument("unknown preset: " + std::string(name));
    }();
    SpectralState initial{std::vector<double>(n_modes, 0.0), 0.0};
    // <sin(pi .), sqrt(2) sin(pi .)> = 1 / sqrt(2)
    initial.coeffs[0] = 1.0 / std::numbers::sqrt2;
    SolverConfig c{n_modes,
                   m_steps,
                   horizon,
                   HurstParameter(0.75),
                   dirichlet_laplacian(n_modes),
                   std::move(noise),
                   NemytskiiMap::sin(),
                   std::move(initial),
                   seed,
                   method};
    c.validate();
    return c;
}

inline bool is_preset(std::string_view name) { return name == "she-identity" || name == "she-trace"; }

}  // namespace fracspde::experiments
