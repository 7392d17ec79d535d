#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fracspde/fbm/generate.hpp"
#include "fracspde/fbm/hurst.hpp"
#include "fracspde/spectral/nemytskii.hpp"
#include "fracspde/spectral/operator.hpp"

namespace fracspde {

/// Raised when a run produces a non-finite state.
class RunError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Full discretisation parameters. tau = horizon / m_steps is derived.
struct SolverConfig {
    std::size_t n_modes;
    std::size_t m_steps;
    double horizon;
    HurstParameter hurst;
    SpectralOperator op;
    DiagonalNoiseOperator noise;
    NemytskiiMap nonlinearity;
    SpectralState initial;
    std::uint64_t base_seed = 0;
    FbmMethod fbm_method = FbmMethod::circulant;

    [[nodiscard]] double tau() const noexcept { return horizon / static_cast<double>(m_steps); }
    [[nodiscard]] IncrementGrid grid() const { return IncrementGrid::over(horizon, m_steps); }

    void validate() const {
        if (n_modes == 0) throw std::domain_error("solver: n_modes must be >= 1");
        if (m_steps == 0) throw std::domain_error("solver: m_steps must be >= 1");
        if (!(horizon > 0.0)) throw std::domain_error("solver: horizon must be positive");
        if (op.size() != n_modes) throw std::domain_error("solver: operator size != n_modes");
        if (noise.size() != n_modes) throw std::domain_error("solver: noise size != n_modes");
        if (initial.size() != n_modes) throw std::domain_error("solver: initial state size != n_modes");
        noise.validate(hurst);
    }

    /// Copy at spectral truncation n (operator, noise and initial data cut or
    /// extended consistently; extension pads the initial state with zeros).
    [[nodiscard]] SolverConfig with_modes(std::size_t n) const {
        SolverConfig c = *this;
        c.n_modes = n;
        c.op = op.truncated(n);
        c.noise = noise.truncated(n);
        c.initial.coeffs.resize(n, 0.0);
        return c;
    }

    [[nodiscard]] SolverConfig with_steps(std::size_t m) const {
        SolverConfig c = *this;
        c.m_steps = m;
        return c;
    }
};

namespace detail {
struct Fnv1a {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    void bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 0x100000001b3ULL;
        }
    }
    void u64(std::uint64_t v) { bytes(&v, sizeof v); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void str(std::string_view s) { bytes(s.data(), s.size()); }
};
}  // namespace detail

/// FNV-1a digest over every field that influences a run.
inline std::uint64_t config_digest(const SolverConfig& c) {
    detail::Fnv1a f;
    f.u64(c.n_modes);
    f.u64(c.m_steps);
    f.f64(c.horizon);
    f.f64(c.hurst.value());
    f.str(c.op.description());
    for (double v : c.op.eigenvalues()) f.f64(v);
    f.u64(static_cast<std::uint64_t>(c.noise.kind()));
    f.f64(c.noise.beta());
    for (double v : c.noise.amplitudes()) f.f64(v);
    f.u64(static_cast<std::uint64_t>(c.nonlinearity.kind));
    f.f64(c.nonlinearity.lipschitz_bound);
    for (double v : c.initial.coeffs) f.f64(v);
    f.u64(c.base_seed);
    f.u64(static_cast<std::uint64_t>(c.fbm_method));
    return f.h;
}

}  // namespace fracspde
