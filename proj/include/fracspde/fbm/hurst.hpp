#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracspde {

/// Hurst index restricted to the persistent regime H in (1/2, 1).
class HurstParameter {
public:
    explicit HurstParameter(double h) : h_(h), alpha_(h * (2.0 * h - 1.0)) {
        if (!(h > 0.5 && h < 1.0)) {
            throw std::domain_error("hurst must be in (0.5, 1), got " + std::to_string(h));
        }
    }

    [[nodiscard]] double value() const noexcept { return h_; }

    /// alpha_H = H (2H - 1), the normalisation of the kernel phi.
    [[nodiscard]] double alpha() const noexcept { return alpha_; }

    friend bool operator==(const HurstParameter&, const HurstParameter&) = default;

private:
    double h_;
    double alpha_;
};

/// Uniform time grid of m_steps intervals of width tau.
class IncrementGrid {
public:
    IncrementGrid(std::size_t m_steps, double tau) : m_steps_(m_steps), tau_(tau) {
        if (m_steps == 0) throw std::domain_error("grid needs at least one step");
        if (!(tau > 0.0)) throw std::domain_error("grid step tau must be positive");
    }

    /// Grid covering [0, horizon] with m_steps steps (tau = horizon / m_steps).
    static IncrementGrid over(double horizon, std::size_t m_steps) {
        if (m_steps == 0) throw std::domain_error("grid needs at least one step");
        return IncrementGrid(m_steps, horizon / static_cast<double>(m_steps));
    }

    [[nodiscard]] std::size_t steps() const noexcept { return m_steps_; }
    [[nodiscard]] double tau() const noexcept { return tau_; }
    [[nodiscard]] double horizon() const noexcept { return static_cast<double>(m_steps_) * tau_; }
    [[nodiscard]] double time(std::size_t i) const noexcept { return static_cast<double>(i) * tau_; }

    friend bool operator==(const IncrementGrid&, const IncrementGrid&) = default;

private:
    std::size_t m_steps_;
    double tau_;
};

}  // namespace fracspde
