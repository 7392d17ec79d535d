#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fracspde/experiments/parallel.hpp"
#include "fracspde/fbm/covariance.hpp"
#include "fracspde/fbm/generate.hpp"
#include "fracspde/seeding.hpp"
#include "fracspde/verify/quadrature.hpp"

namespace fracspde::verify {

struct PhiCellCheck {
    double analytic;
    double quadrature;
    double bound;           // 1/2 max(i, j)^{2H-1}; NaN when not applicable
    bool bound_applicable;  // i != j and both indices >= 1
    bool bound_holds;
};

/// int_0^1 int_0^1 phi(u + i - v - j) du dv, closed form next to quadrature.
inline PhiCellCheck check_phi_cell_integral(std::size_t i, std::size_t j, const HurstParameter& h) {
    const double two_h = 2.0 * h.value();
    PhiCellCheck out{};
    if (i == j) {
        out.analytic = 1.0;
        out.quadrature = phi_square_integral([](double, double) { return 1.0; }, 0.0, 1.0, h);
        out.bound = std::numeric_limits<double>::quiet_NaN();
        out.bound_applicable = false;
        out.bound_holds = true;
        return out;
    }
    const std::size_t k = i > j ? i - j : j - i;
    out.analytic = fgn_autocovariance(k, h);
    const double shift = static_cast<double>(k);
    if (k == 1) {
        // Cells touch at one corner: with x = u, z = 1 - v the argument is x + z.
        out.quadrature = corner_singular_integral(
            [&](double x, double z) { return x + z == 0.0 ? 0.0 : h.alpha() * std::pow(x + z, two_h - 2.0); }, h);
    } else {
        out.quadrature = tensor_gauss_legendre(
            [&](double u, double v) { return kernel_phi(u + shift - v, h); }, 0.0, 1.0, 0.0, 1.0);
    }
    out.bound_applicable = i >= 1 && j >= 1;
    if (out.bound_applicable) {
        const double m = static_cast<double>(i > j ? i : j);
        out.bound = 0.5 * std::pow(m, two_h - 1.0);
        out.bound_holds = out.analytic <= out.bound;
    } else {
        out.bound = std::numeric_limits<double>::quiet_NaN();
        out.bound_holds = true;
    }
    return out;
}

/// lambda^{2H + k1 + k2} int_0^t int_0^t u^{k1} v^{k2} e^{-lambda(u+v)} phi(u - v) du dv.
inline double check_lambda_phi_bound(double lambda, double t, int kappa1, int kappa2, const HurstParameter& h) {
    if (!(lambda > 0.0) || !(t > 0.0)) throw std::domain_error("check_lambda_phi_bound: lambda, t must be > 0");
    if ((kappa1 != 0 && kappa1 != 1) || (kappa2 != 0 && kappa2 != 1)) {
        throw std::domain_error("check_lambda_phi_bound: kappa must be 0 or 1");
    }
    auto f = [&](double u, double v) {
        return std::pow(u, kappa1) * std::pow(v, kappa2) * std::exp(-lambda * (u + v));
    };
    const double integral = phi_square_integral(f, 0.0, t, h, 64);
    return std::pow(lambda, 2.0 * h.value() + kappa1 + kappa2) * integral;
}

/// int_s^t int_s^t lambda^{2 delta} e^{-lambda(2t - u - v)} phi(u - v) du dv for
/// x = e_i with A e_i = lambda e_i; depends on s, t only through lag = t - s.
/// Reflection u -> t + s - u maps the weight onto e^{-lambda(u + v)}.
inline double semigroup_phi_integral(double lambda, double lag, double delta, const HurstParameter& h) {
    if (!(lambda > 0.0) || !(lag > 0.0)) throw std::domain_error("semigroup_phi_integral: lambda, lag must be > 0");
    const double integral =
        phi_square_integral([&](double u, double v) { return std::exp(-lambda * (u + v)); }, 0.0, lag, h, 64);
    return std::pow(lambda, 2.0 * delta) * integral;
}

struct IsometryCheck {
    double mc_lhs;
    double analytic_rhs;
    double std_error;
};

/// Psi is piecewise constant: Psi_i (d x K) on step i of `grid`. Compares
/// E || sum_i Psi_i dW_i ||^2 (Monte Carlo) with
/// sum_{i,j} <Psi_i, Psi_j>_{L2} E[dw_i dw_j].
inline IsometryCheck check_ito_isometry(const std::vector<Eigen::MatrixXd>& integrand, const IncrementGrid& grid,
                                        const HurstParameter& h, std::size_t samples, std::uint64_t seed,
                                        FbmMethod method = FbmMethod::circulant, std::size_t workers = 1) {
    if (integrand.size() != grid.steps()) throw std::domain_error("check_ito_isometry: integrand/grid mismatch");
    if (samples < 2) throw std::domain_error("check_ito_isometry: need samples >= 2");
    const auto rows = integrand.front().rows();
    const auto modes = integrand.front().cols();
    for (const auto& block : integrand) {
        if (block.rows() != rows || block.cols() != modes) {
            throw std::domain_error("check_ito_isometry: inconsistent block shapes");
        }
    }
    const std::size_t m = grid.steps();
    double rhs = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            rhs += (integrand[i].array() * integrand[j].array()).sum() * increment_covariance(i, j, grid, h);
        }
    }
    std::vector<double> values(samples);
    experiments::parallel_for(samples, workers, [&](std::size_t s) {
        const auto w = generate_cylindrical_fbm(static_cast<std::size_t>(modes), grid, h, derive_seed(seed, s), method);
        Eigen::VectorXd y = Eigen::VectorXd::Zero(rows);
        Eigen::VectorXd dw(modes);
        for (std::size_t i = 0; i < m; ++i) {
            for (Eigen::Index k = 0; k < modes; ++k) dw(k) = w.row(static_cast<std::size_t>(k))[i];
            y += integrand[i] * dw;
        }
        values[s] = y.squaredNorm();
    });
    const double n = static_cast<double>(samples);
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= (n - 1.0);
    return {mean, rhs, std::sqrt(var / n)};
}

}  // namespace fracspde::verify
