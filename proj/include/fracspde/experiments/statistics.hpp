#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

namespace fracspde::experiments {

struct RmsEstimate {
    double rms;
    double std_error;  // delta-method standard error of rms
};

/// Root mean square of per-sample errors, summed in index order.
inline RmsEstimate rms_error(std::span<const double> errors) {
    if (errors.size() < 2) throw std::domain_error("rms_error: need at least two samples");
    const double n = static_cast<double>(errors.size());
    double m2 = 0.0;
    for (double e : errors) m2 += e * e;
    m2 /= n;
    double var = 0.0;
    for (double e : errors) {
        const double d = e * e - m2;
        var += d * d;
    }
    var /= (n - 1.0);
    const double rms = std::sqrt(m2);
    const double se_m2 = std::sqrt(var / n);
    return {rms, rms > 0.0 ? 0.5 * se_m2 / rms : 0.0};
}

struct SlopeFit {
    double slope;
    double intercept;
    double halfwidth;  // 2 x standard error of the slope
};

/// Ordinary least squares of log(y) on log(x).
inline SlopeFit fit_slope(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw std::domain_error("fit_slope: length mismatch");
    if (xs.size() < 3) throw std::domain_error("fit_slope: need at least three points");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw std::domain_error("fit_slope: values must be positive");
        mx += std::log(xs[i]);
        my += std::log(ys[i]);
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = std::log(xs[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(ys[i]) - my);
    }
    if (sxx == 0.0) throw std::domain_error("fit_slope: abscissae are all equal");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = std::log(ys[i]) - (intercept + slope * std::log(xs[i]));
        ssr += r * r;
    }
    const double se = std::sqrt(ssr / (n - 2.0) / sxx);
    return {slope, intercept, 2.0 * se};
}

}  // namespace fracspde::experiments
