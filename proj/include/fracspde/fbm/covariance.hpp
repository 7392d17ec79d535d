#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fracspde/fbm/hurst.hpp"

namespace fracspde {

/// R_H(s, t) = 1/2 (s^{2H} + t^{2H} - |t - s|^{2H}).
inline double fbm_covariance(double s, double t, const HurstParameter& h) {
    if (s < 0.0 || t < 0.0) throw std::domain_error("fbm_covariance: negative time");
    const double p = 2.0 * h.value();
    return 0.5 * (std::pow(s, p) + std::pow(t, p) - std::pow(std::abs(t - s), p));
}

/// phi(y) = alpha_H |y|^{2H-2}; singular at the origin.
inline double kernel_phi(double y, const HurstParameter& h) {
    if (y == 0.0) throw std::domain_error("kernel_phi: singular at y = 0");
    return h.alpha() * std::pow(std::abs(y), 2.0 * h.value() - 2.0);
}

/// Autocovariance of unit-step fractional Gaussian noise at lag k:
/// 1/2 (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}).
inline double fgn_autocovariance(std::size_t lag, const HurstParameter& h) {
    const double p = 2.0 * h.value();
    const double k = static_cast<double>(lag);
    if (lag == 0) return 1.0;
    return 0.5 * (std::pow(k + 1.0, p) - 2.0 * std::pow(k, p) + std::pow(k - 1.0, p));
}

/// E[dw_i dw_j] for increments on a uniform grid.
inline double increment_covariance(std::size_t i, std::size_t j, const IncrementGrid& grid,
                                   const HurstParameter& h) {
    if (i >= grid.steps() || j >= grid.steps()) {
        throw std::domain_error("increment_covariance: index out of range");
    }
    const std::size_t lag = i > j ? i - j : j - i;
    return std::pow(grid.tau(), 2.0 * h.value()) * fgn_autocovariance(lag, h);
}

/// Dense M x M increment covariance, row-major.
inline std::vector<double> increment_covariance_matrix(const IncrementGrid& grid,
                                                       const HurstParameter& h) {
    const std::size_t m = grid.steps();
    const double scale = std::pow(grid.tau(), 2.0 * h.value());
    std::vector<double> acov(m);
    for (std::size_t k = 0; k < m; ++k) acov[k] = scale * fgn_autocovariance(k, h);
    std::vector<double> out(m * m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) out[i * m + j] = acov[i > j ? i - j : j - i];
    }
    return out;
}

}  // namespace fracspde
