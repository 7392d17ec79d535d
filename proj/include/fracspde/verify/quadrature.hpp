#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include <array>
#include <cmath>
#include <cstddef>

#include "fracspde/fbm/hurst.hpp"

namespace fracspde::verify {

/// 32-point Gauss-Legendre rule mapped to [0, 1].
struct GaussLegendre32 {
    std::array<double, 32> nodes{};
    std::array<double, 32> weights{};

    static const GaussLegendre32& get() {
        static const GaussLegendre32 rule = [] {
            using Gauss = boost::math::quadrature::gauss<double, 32>;
            const auto& x = Gauss::abscissa();
            const auto& w = Gauss::weights();
            GaussLegendre32 r;
            for (std::size_t i = 0; i < 16; ++i) {
                r.nodes[15 - i] = 0.5 * (1.0 - x[i]);
                r.nodes[16 + i] = 0.5 * (1.0 + x[i]);
                r.weights[15 - i] = 0.5 * w[i];
                r.weights[16 + i] = 0.5 * w[i];
            }
            return r;
        }();
        return rule;
    }
};

template <class F>
double gauss_legendre(F&& f, double a, double b) {
    const auto& gl = GaussLegendre32::get();
    double acc = 0.0;
    for (std::size_t i = 0; i < 32; ++i) acc += gl.weights[i] * f(a + (b - a) * gl.nodes[i]);
    return (b - a) * acc;
}

/// Composite rule on [0, 1] with panels [2^{-p-1}, 2^{-p}], p < levels, plus
/// [0, 2^{-levels}]; resolves integrands concentrated at 0.
template <class F>
double graded_unit_integral(F&& f, int levels) {
    double acc = 0.0;
    double hi = 1.0;
    for (int p = 0; p < levels; ++p) {
        const double lo = 0.5 * hi;
        acc += gauss_legendre(f, lo, hi);
        hi = lo;
    }
    return acc + gauss_legendre(f, 0.0, hi);
}

/// Tensor 32 x 32 rule on [a, b] x [c, d].
template <class F>
double tensor_gauss_legendre(F&& f, double a, double b, double c, double d) {
    return gauss_legendre([&](double u) { return gauss_legendre([&](double v) { return f(u, v); }, c, d); }, a, b);
}

/// int_0^1 int_0^1 g(x, z) dz dx for g ~ (x + z)^{2H-2} near the origin.
/// Duffy split into the triangles z <= x and x <= z, then x = q^{1/(2H)}
/// absorbs the remaining x^{2H-1} weight.
template <class G>
double corner_singular_integral(G&& g, const HurstParameter& h) {
    const double two_h = 2.0 * h.value();
    auto integrand = [&](double q) {
        if (q == 0.0) return 0.0;
        const double x = std::pow(q, 1.0 / two_h);
        const double w = std::pow(x, 2.0 - two_h) / two_h;
        return gauss_legendre([&](double s) { return w * (g(x, x * s) + g(x * s, x)); }, 0.0, 1.0);
    };
    return graded_unit_integral(integrand, 8);
}

/// alpha_H int_s^t int_s^v f(u, v) (v - u)^{2H-2} du dv, via u = s + (v - s) r,
/// sigma = (1 - r)^{2H-1} and v = s + (t - s) omega^{1/(2H)}, which remove
/// both the diagonal singularity and the (v - s)^{2H-1} weight.
template <class F>
double lower_triangle_phi_integral(F&& f, double s, double t, const HurstParameter& h, int levels = 48) {
    const double two_h = 2.0 * h.value();
    const double p = two_h - 1.0;
    const double len = t - s;
    auto inner = [&](double v) {
        return graded_unit_integral(
            [&](double sigma) {
                const double r = 1.0 - std::pow(sigma, 1.0 / p);
                return f(s + (v - s) * r, v);
            },
            4) / p;
    };
    const double outer = graded_unit_integral(
        [&](double omega) { return inner(s + len * std::pow(omega, 1.0 / two_h)); }, levels);
    return h.alpha() * std::pow(len, two_h) / two_h * outer;
}

/// int_s^t int_s^t f(u, v) phi(u - v) du dv for smooth f.
template <class F>
double phi_square_integral(F&& f, double s, double t, const HurstParameter& h, int levels = 48) {
    return lower_triangle_phi_integral(f, s, t, h, levels) +
           lower_triangle_phi_integral([&](double u, double v) { return f(v, u); }, s, t, h, levels);
}

}  // namespace fracspde::verify
