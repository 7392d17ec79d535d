#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracspde/spectral/operator.hpp"
#include "fracspde/spectral/transform.hpp"

namespace fracspde {

enum class NemytskiiKind { zero, identity_scaled, pointwise_sin };

inline std::string nemytskii_name(NemytskiiKind k) {
    switch (k) {
        case NemytskiiKind::zero: return "zero";
        case NemytskiiKind::identity_scaled: return "identity_scaled";
        case NemytskiiKind::pointwise_sin: return "pointwise_sin";
    }
    return "zero";
}

/// Globally Lipschitz drift F. pointwise_sin is evaluated by collocation on
/// the N-point sine grid (no dealiasing).
struct NemytskiiMap {
    NemytskiiKind kind = NemytskiiKind::zero;
    double lipschitz_bound = 1.0;

    static NemytskiiMap zero() { return {NemytskiiKind::zero, 1.0}; }
    static NemytskiiMap sin() { return {NemytskiiKind::pointwise_sin, 1.0}; }
    static NemytskiiMap scaled_identity(double l) {
        if (!(l > 0.0)) throw std::domain_error("Lipschitz bound must be positive");
        return {NemytskiiKind::identity_scaled, l};
    }

    [[nodiscard]] bool is_zero() const noexcept { return kind == NemytskiiKind::zero; }
};

/// out = coefficients of F(x). `scratch` must have the same length as x.
inline void apply_nemytskii(const NemytskiiMap& f, std::span<const double> x, std::span<double> out,
                            std::span<double> scratch) {
    if (x.size() != out.size() || scratch.size() != x.size()) {
        throw std::domain_error("apply_nemytskii: dimension mismatch");
    }
    switch (f.kind) {
        case NemytskiiKind::zero:
            std::fill(out.begin(), out.end(), 0.0);
            return;
        case NemytskiiKind::identity_scaled:
            for (std::size_t i = 0; i < x.size(); ++i) out[i] = f.lipschitz_bound * x[i];
            return;
        case NemytskiiKind::pointwise_sin:
            sine_transform(x, scratch);
            for (auto& v : scratch) v = std::sin(v);
            inverse_sine_transform(scratch, out);
            return;
    }
}

inline SpectralState apply_nemytskii(const NemytskiiMap& f, const SpectralState& x) {
    SpectralState y{std::vector<double>(x.size()), x.time};
    std::vector<double> scratch(x.size());
    apply_nemytskii(f, x.coeffs, y.coeffs, scratch);
    return y;
}

}  // namespace fracspde
