#pragma once

// Thin thread-safe wrapper over the FFTW3 plans this library needs.
// Planning is serialised through one mutex; execution uses the new-array
// interface, which FFTW documents as thread-safe.

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>
#include <utility>

namespace fracspde::detail {

enum class PlanKind { dst1, dct1, c2r };

class FftwPlanCache {
public:
    static FftwPlanCache& instance() {
        static FftwPlanCache cache;
        return cache;
    }

    FftwPlanCache(const FftwPlanCache&) = delete;
    FftwPlanCache& operator=(const FftwPlanCache&) = delete;

    fftw_plan get(PlanKind kind, int n) {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(kind, n);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        fftw_plan plan = make(kind, n);
        if (plan == nullptr) throw std::runtime_error("fftw planning failed");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    FftwPlanCache() = default;
    ~FftwPlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    static fftw_plan make(PlanKind kind, int n) {
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        switch (kind) {
            case PlanKind::dst1:
            case PlanKind::dct1: {
                auto* in = fftw_alloc_real(static_cast<std::size_t>(n));
                auto* out = fftw_alloc_real(static_cast<std::size_t>(n));
                auto r2r = kind == PlanKind::dst1 ? FFTW_RODFT00 : FFTW_REDFT00;
                fftw_plan p = fftw_plan_r2r_1d(n, in, out, r2r, flags);
                fftw_free(in);
                fftw_free(out);
                return p;
            }
            case PlanKind::c2r: {
                auto* in = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
                auto* out = fftw_alloc_real(static_cast<std::size_t>(n));
                fftw_plan p = fftw_plan_dft_c2r_1d(n, in, out, flags | FFTW_DESTROY_INPUT);
                fftw_free(in);
                fftw_free(out);
                return p;
            }
        }
        return nullptr;
    }

    std::mutex mutex_;
    std::map<std::pair<PlanKind, int>, fftw_plan> plans_;
};

/// Unnormalised DST-I: out_k = 2 sum_j in_j sin(pi (j+1)(k+1) / (n+1)).
/// Out-of-place 1-D r2r plans preserve their input, hence the const_cast.
inline void dst1(std::span<const double> in, std::span<double> out) {
    const int n = static_cast<int>(in.size());
    fftw_execute_r2r(FftwPlanCache::instance().get(PlanKind::dst1, n), const_cast<double*>(in.data()),
                     out.data());
}

/// Unnormalised DCT-I on n >= 2 points:
/// out_k = in_0 + (-1)^k in_{n-1} + 2 sum_{j=1}^{n-2} in_j cos(pi j k / (n-1)).
inline void dct1(std::span<const double> in, std::span<double> out) {
    const int n = static_cast<int>(in.size());
    fftw_execute_r2r(FftwPlanCache::instance().get(PlanKind::dct1, n), const_cast<double*>(in.data()),
                     out.data());
}

/// Complex-to-real inverse DFT of length out.size() from the n/2+1 Hermitian
/// half spectrum; the input is destroyed.
inline void c2r(std::span<std::complex<double>> in, std::span<double> out) {
    const int n = static_cast<int>(out.size());
    fftw_execute_dft_c2r(FftwPlanCache::instance().get(PlanKind::c2r, n),
                         reinterpret_cast<fftw_complex*>(in.data()), out.data());
}

}  // namespace fracspde::detail
