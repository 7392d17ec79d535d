#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fracspde/detail/fftw.hpp"
#include "fracspde/fbm/covariance.hpp"
#include "fracspde/fbm/hurst.hpp"
#include "fracspde/seeding.hpp"

namespace fracspde {

enum class FbmMethod { cholesky, circulant };

inline std::string_view to_string(FbmMethod m) {
    return m == FbmMethod::cholesky ? "cholesky" : "circulant";
}

inline FbmMethod parse_fbm_method(std::string_view s) {
    if (s == "cholesky") return FbmMethod::cholesky;
    if (s == "circulant") return FbmMethod::circulant;
    throw std::invalid_argument("unknown fbm method: " + std::string(s));
}

/// Raised when the circulant embedding is not nonnegative definite.
class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ScalarFbmIncrements {
    IncrementGrid grid;
    std::vector<double> values;
    HurstParameter hurst;
    std::uint64_t seed;
};

/// K independent scalar fBm increment rows on one grid, stored row-major.
/// Row k is generated from derive_seed(base_seed, k) alone.
class CylindricalFbmSample {
public:
    CylindricalFbmSample(std::size_t modes, IncrementGrid grid, HurstParameter hurst,
                         std::uint64_t base_seed, std::vector<double> data)
        : modes_(modes), grid_(grid), hurst_(hurst), base_seed_(base_seed), data_(std::move(data)) {
        if (modes_ == 0) throw std::domain_error("cylindrical sample needs at least one mode");
        if (data_.size() != modes_ * grid_.steps()) {
            throw std::domain_error("cylindrical sample: data size does not match modes x steps");
        }
    }

    [[nodiscard]] std::size_t modes() const noexcept { return modes_; }
    [[nodiscard]] const IncrementGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] const HurstParameter& hurst() const noexcept { return hurst_; }
    [[nodiscard]] std::uint64_t base_seed() const noexcept { return base_seed_; }

    /// Increments of mode k (0-based; mode k drives eigenfunction e_{k+1}).
    [[nodiscard]] std::span<const double> row(std::size_t k) const {
        return {data_.data() + k * grid_.steps(), grid_.steps()};
    }
    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

    [[nodiscard]] ScalarFbmIncrements mode(std::size_t k) const {
        auto r = row(k);
        return {grid_, {r.begin(), r.end()}, hurst_, derive_seed(base_seed_, k)};
    }

private:
    std::size_t modes_;
    IncrementGrid grid_;
    HurstParameter hurst_;
    std::uint64_t base_seed_;
    std::vector<double> data_;
};

namespace detail {

inline std::uint64_t hurst_key(const HurstParameter& h) { return std::bit_cast<std::uint64_t>(h.value()); }

/// Lower Cholesky factor of the unit-step fGn covariance, cached per (M, H).
class CholeskyFactorCache {
public:
    static CholeskyFactorCache& instance() {
        static CholeskyFactorCache cache;
        return cache;
    }

    std::shared_ptr<const Eigen::MatrixXd> get(std::size_t m, const HurstParameter& h) {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(m, hurst_key(h));
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        Eigen::MatrixXd cov(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    fgn_autocovariance(i > j ? i - j : j - i, h);
            }
        }
        Eigen::LLT<Eigen::MatrixXd> llt(cov);
        if (llt.info() != Eigen::Success) throw GenerationError("fGn covariance is not positive definite");
        auto factor = std::make_shared<const Eigen::MatrixXd>(llt.matrixL());
        cache_.emplace(key, factor);
        return factor;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, std::uint64_t>, std::shared_ptr<const Eigen::MatrixXd>> cache_;
};

/// Circulant embedding of unit-step fGn of length M in size 2M. Holds the
/// per-frequency standard deviations used by the Wood-Chan construction.
struct CirculantEmbedding {
    std::vector<double> scale;  // j = 0..M
};

class CirculantCache {
public:
    static CirculantCache& instance() {
        static CirculantCache cache;
        return cache;
    }

    std::shared_ptr<const CirculantEmbedding> get(std::size_t m, const HurstParameter& h) {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(m, hurst_key(h));
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        auto emb = std::make_shared<const CirculantEmbedding>(build(m, h));
        cache_.emplace(key, emb);
        return emb;
    }

    /// Eigenvalues of the 2M circulant whose first row is
    /// [c_0, ..., c_M, c_{M-1}, ..., c_1].
    static std::vector<double> eigenvalues(std::size_t m, const HurstParameter& h) {
        std::vector<double> row(m + 1);
        for (std::size_t k = 0; k <= m; ++k) row[k] = fgn_autocovariance(k, h);
        std::vector<double> eig(m + 1);
        dct1(row, eig);
        return eig;
    }

private:
    static CirculantEmbedding build(std::size_t m, const HurstParameter& h) {
        auto eig = eigenvalues(m, h);
        const double max_eig = *std::max_element(eig.begin(), eig.end());
        const double n = 2.0 * static_cast<double>(m);
        CirculantEmbedding emb;
        emb.scale.resize(m + 1);
        for (std::size_t j = 0; j <= m; ++j) {
            double lam = eig[j];
            if (lam < 0.0) {
                if (lam < -1e-10 * max_eig) {
                    throw GenerationError("circulant embedding has negative eigenvalue " +
                                          std::to_string(lam) + " at frequency " + std::to_string(j));
                }
                lam = 0.0;
            }
            const bool real_bin = (j == 0 || j == m);
            emb.scale[j] = std::sqrt(lam / (real_bin ? n : 2.0 * n));
        }
        return emb;
    }

    std::mutex mutex_;
    std::map<std::pair<std::size_t, std::uint64_t>, std::shared_ptr<const CirculantEmbedding>> cache_;
};

inline void sample_cholesky(std::span<double> out, const HurstParameter& h, std::mt19937_64& rng) {
    const std::size_t m = out.size();
    auto factor = CholeskyFactorCache::instance().get(m, h);
    std::normal_distribution<double> normal;
    std::vector<double> z(m);
    for (auto& v : z) v = normal(rng);
    const auto& l = *factor;
    for (std::size_t i = 0; i < m; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j <= i; ++j) {
            acc += l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * z[j];
        }
        out[i] = acc;
    }
}

inline void sample_circulant(std::span<double> out, const HurstParameter& h, std::mt19937_64& rng) {
    const std::size_t m = out.size();
    auto emb = CirculantCache::instance().get(m, h);
    std::normal_distribution<double> normal;
    std::vector<std::complex<double>> spec(m + 1);
    spec[0] = {emb->scale[0] * normal(rng), 0.0};
    for (std::size_t j = 1; j < m; ++j) {
        const double re = normal(rng);
        const double im = normal(rng);
        spec[j] = {emb->scale[j] * re, emb->scale[j] * im};
    }
    spec[m] = {emb->scale[m] * normal(rng), 0.0};
    std::vector<double> full(2 * m);
    c2r(spec, full);
    std::copy_n(full.begin(), m, out.begin());
}

}  // namespace detail

/// Fills `out` (length = grid.steps()) with exact fBm increments.
inline void fill_fbm_increments(std::span<double> out, const IncrementGrid& grid, const HurstParameter& h,
                                std::uint64_t seed, FbmMethod method) {
    if (out.size() != grid.steps()) throw std::domain_error("fill_fbm_increments: size mismatch");
    std::mt19937_64 rng(seed);
    if (method == FbmMethod::cholesky) {
        detail::sample_cholesky(out, h, rng);
    } else {
        detail::sample_circulant(out, h, rng);
    }
    const double scale = std::pow(grid.tau(), h.value());
    for (auto& v : out) v *= scale;
}

inline ScalarFbmIncrements generate_scalar_fbm(const IncrementGrid& grid, const HurstParameter& h,
                                               std::uint64_t seed, FbmMethod method) {
    ScalarFbmIncrements result{grid, std::vector<double>(grid.steps()), h, seed};
    fill_fbm_increments(result.values, grid, h, seed, method);
    return result;
}

inline CylindricalFbmSample generate_cylindrical_fbm(std::size_t modes, const IncrementGrid& grid,
                                                     const HurstParameter& h, std::uint64_t base_seed,
                                                     FbmMethod method) {
    if (modes == 0) throw std::domain_error("generate_cylindrical_fbm: modes must be >= 1");
    const std::size_t m = grid.steps();
    std::vector<double> data(modes * m);
    for (std::size_t k = 0; k < modes; ++k) {
        fill_fbm_increments(std::span<double>(data).subspan(k * m, m), grid, h, derive_seed(base_seed, k),
                            method);
    }
    return {modes, grid, h, base_seed, std::move(data)};
}

namespace detail {
inline void aggregate_row(std::span<const double> fine, std::size_t ratio, std::span<double> coarse) {
    for (std::size_t j = 0; j < coarse.size(); ++j) {
        double acc = 0.0;
        for (std::size_t r = 0; r < ratio; ++r) acc += fine[j * ratio + r];
        coarse[j] = acc;
    }
}
}  // namespace detail

/// Sums consecutive blocks of `ratio` increments (left to right).
inline ScalarFbmIncrements aggregate_increments(const ScalarFbmIncrements& fine, std::size_t ratio) {
    if (ratio == 0 || fine.grid.steps() % ratio != 0) {
        throw std::domain_error("aggregate_increments: steps not divisible by ratio");
    }
    if (ratio == 1) return fine;
    IncrementGrid coarse_grid(fine.grid.steps() / ratio, fine.grid.tau() * static_cast<double>(ratio));
    ScalarFbmIncrements out{coarse_grid, std::vector<double>(coarse_grid.steps()), fine.hurst, fine.seed};
    detail::aggregate_row(fine.values, ratio, out.values);
    return out;
}

/// Row-wise aggregation; optionally keeps only the first `keep_modes` rows.
inline CylindricalFbmSample aggregate_increments(const CylindricalFbmSample& fine, std::size_t ratio,
                                                 std::size_t keep_modes = 0) {
    const std::size_t m = fine.grid().steps();
    if (ratio == 0 || m % ratio != 0) {
        throw std::domain_error("aggregate_increments: steps not divisible by ratio");
    }
    const std::size_t modes = keep_modes == 0 ? fine.modes() : keep_modes;
    if (modes > fine.modes()) throw std::domain_error("aggregate_increments: not enough modes");
    IncrementGrid coarse_grid(m / ratio, fine.grid().tau() * static_cast<double>(ratio));
    const std::size_t mc = coarse_grid.steps();
    std::vector<double> data(modes * mc);
    for (std::size_t k = 0; k < modes; ++k) {
        detail::aggregate_row(fine.row(k), ratio, std::span<double>(data).subspan(k * mc, mc));
    }
    return {modes, coarse_grid, fine.hurst(), fine.base_seed(), std::move(data)};
}

}  // namespace fracspde
