#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "fracspde/detail/fftw.hpp"

namespace fracspde {

// Collocation grid x_k = k / (N + 1), k = 1..N, for the basis
// e_n(x) = sqrt(2) sin(n pi x). With this normalisation
// sum_k u_k^2 = (N + 1) sum_n c_n^2.

/// Coefficients -> grid values u(x_k) = sum_n c_n sqrt(2) sin(n pi x_k).
inline void sine_transform(std::span<const double> coeffs, std::span<double> physical) {
    if (coeffs.size() != physical.size()) throw std::domain_error("sine_transform: size mismatch");
    if (coeffs.empty()) throw std::domain_error("sine_transform: empty input");
    detail::dst1(coeffs, physical);
    const double s = 1.0 / std::numbers::sqrt2;
    for (auto& v : physical) v *= s;
}

/// Grid values -> coefficients; exact inverse of sine_transform.
inline void inverse_sine_transform(std::span<const double> physical, std::span<double> coeffs) {
    if (coeffs.size() != physical.size()) throw std::domain_error("inverse_sine_transform: size mismatch");
    if (coeffs.empty()) throw std::domain_error("inverse_sine_transform: empty input");
    detail::dst1(physical, coeffs);
    const double s = 1.0 / (std::numbers::sqrt2 * static_cast<double>(physical.size() + 1));
    for (auto& v : coeffs) v *= s;
}

inline std::vector<double> sine_transform(std::span<const double> coeffs) {
    std::vector<double> out(coeffs.size());
    sine_transform(coeffs, out);
    return out;
}

inline std::vector<double> inverse_sine_transform(std::span<const double> physical) {
    std::vector<double> out(physical.size());
    inverse_sine_transform(physical, out);
    return out;
}

/// Physical grid points for N modes.
inline std::vector<double> collocation_grid(std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k) x[k] = static_cast<double>(k + 1) / static_cast<double>(n + 1);
    return x;
}

}  // namespace fracspde
