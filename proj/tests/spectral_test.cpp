#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "fracspde/fbm/hurst.hpp"
#include "fracspde/spectral/nemytskii.hpp"
#include "fracspde/spectral/operator.hpp"
#include "fracspde/spectral/transform.hpp"

using namespace fracspde;
using std::numbers::pi;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    std::vector<double> v(n);
    for (auto& x : v) x = z(rng);
    return v;
}

SpectralState unit(std::size_t n, std::size_t mode) {
    SpectralState x{std::vector<double>(n, 0.0), 0.0};
    x.coeffs[mode - 1] = 1.0;
    return x;
}

// u_k = sum_n c_n sqrt(2) sin(n pi k / (N + 1)), summed directly.
std::vector<double> direct_sine_transform(const std::vector<double>& c) {
    const std::size_t n = c.size();
    std::vector<double> u(n, 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t m = 1; m <= n; ++m) {
            u[k - 1] += c[m - 1] * std::sqrt(2.0) *
                        std::sin(static_cast<double>(m) * pi * static_cast<double>(k) / static_cast<double>(n + 1));
        }
    }
    return u;
}

double norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

TEST(DirichletLaplacian, Eigenvalues) {
    const auto op = dirichlet_laplacian(10);
    EXPECT_NEAR(op.eigenvalue(1), 9.8696044010893586, 1e-13);
    EXPECT_NEAR(op.eigenvalue(2), 39.478417604357434, 1e-12);
    for (std::size_t n = 1; n < 10; ++n) EXPECT_GT(op.eigenvalue(n + 1), op.eigenvalue(n));
    EXPECT_DOUBLE_EQ(op.eigenvalue(1000), 1e6 * pi * pi);
    EXPECT_EQ(op.description(), "dirichlet-laplacian-(0,1)");
    EXPECT_THROW(dirichlet_laplacian(0), std::domain_error);
}

TEST(SpectralOperator, RejectsBadSpectrum) {
    EXPECT_THROW(SpectralOperator({0.0, 1.0}, "x"), std::domain_error);
    EXPECT_THROW(SpectralOperator({2.0, 1.0}, "x"), std::domain_error);
    EXPECT_THROW(SpectralOperator({}, "x"), std::domain_error);
    const SpectralOperator op({1.0, 2.0}, "custom");
    EXPECT_THROW((void)op.eigenvalue(3), std::domain_error);
    EXPECT_THROW((void)op.truncated(3), std::domain_error);
    EXPECT_EQ(op.truncated(1).size(), 1u);
}

TEST(Semigroup, Examples) {
    const auto op = dirichlet_laplacian(4);
    const auto x = SpectralState{random_vector(4, 1), 0.0};
    const auto y0 = semigroup_apply(op, 0.0, x);
    EXPECT_EQ(y0.coeffs, x.coeffs);
    const auto y = semigroup_apply(dirichlet_laplacian(1), 0.1, unit(1, 1));
    EXPECT_NEAR(y.coeffs[0], 0.37270783885343794, 1e-15);
    EXPECT_THROW(semigroup_apply(op, -1e-3, x), std::domain_error);
    EXPECT_THROW(semigroup_apply(op, 1.0, unit(3, 1)), std::domain_error);
}

TEST(Semigroup, AdditivityAndContraction) {
    const auto op = dirichlet_laplacian(32);
    const SpectralState x{random_vector(32, 2), 0.0};
    const auto a = semigroup_apply(op, 0.003, semigroup_apply(op, 0.007, x));
    const auto b = semigroup_apply(op, 0.01, x);
    for (std::size_t n = 0; n < 32; ++n) {
        EXPECT_NEAR(a.coeffs[n], b.coeffs[n], 1e-12 * std::abs(b.coeffs[n]) + 1e-300);
    }
    EXPECT_LE(l2_norm(b), l2_norm(x));
}

TEST(Semigroup, SmoothingBoundWithExactConstant) {
    const auto op = dirichlet_laplacian(256);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const SpectralState x{random_vector(256, 10 + seed), 0.0};
        for (double gamma : {0.25, 0.5, 1.0}) {
            for (double t : {1e-3, 1e-2, 1e-1}) {
                const double lhs = l2_norm(fractional_power_apply(op, gamma, semigroup_apply(op, t, x)));
                const double c = std::pow(gamma / std::numbers::e, gamma);
                EXPECT_LE(lhs, c * std::pow(t, -gamma) * l2_norm(x) * (1.0 + 1e-12));
            }
        }
    }
}

TEST(FractionalPower, Examples) {
    const auto op = dirichlet_laplacian(8);
    const SpectralState x{random_vector(8, 3), 0.0};
    EXPECT_EQ(fractional_power_apply(op, 0.0, x).coeffs, x.coeffs);
    const auto back = fractional_power_apply(op, -1.0, fractional_power_apply(op, 1.0, x));
    for (std::size_t n = 0; n < 8; ++n) EXPECT_NEAR(back.coeffs[n], x.coeffs[n], 1e-14 * std::abs(x.coeffs[n]));
    EXPECT_NEAR(fractional_power_apply(op, 0.5, unit(8, 2)).coeffs[1], 6.2831853071795862, 1e-14);
}

TEST(RationalStep, Examples) {
    const SpectralOperator tiny({1e-300}, "tiny");
    EXPECT_DOUBLE_EQ(rational_step_factor(tiny, 1.0)[0], 1.0);
    EXPECT_NEAR(rational_step_factor(dirichlet_laplacian(1), 0.01)[0], 0.9101698376462755, 1e-15);
    EXPECT_EQ(rational_step_factor(SpectralOperator({1.0}, "one"), 1.0)[0], 0.5);
    EXPECT_THROW(rational_step_factor(dirichlet_laplacian(2), 0.0), std::domain_error);
}

TEST(RationalStep, MonotoneInUnitInterval) {
    const auto r = rational_step_factor(dirichlet_laplacian(64), 1e-3);
    for (std::size_t n = 0; n < r.size(); ++n) {
        EXPECT_GT(r[n], 0.0);
        EXPECT_LT(r[n], 1.0);
        if (n > 0) {
            EXPECT_LT(r[n], r[n - 1]);
        }
    }
}

TEST(RationalStep, StabilityAndAccuracyOnUnitInterval) {
    for (int i = 0; i <= 10000; ++i) {
        const double z = i / 10000.0;
        const double r = 1.0 / (1.0 + z);
        EXPECT_LE(r, std::exp(-z / 2.0));
        EXPECT_LE(std::abs(r - std::exp(-z)), z * z / 2.0 + 1e-16);
    }
}

TEST(Projection, Examples) {
    const SpectralState x{random_vector(6, 4), 0.0};
    EXPECT_EQ(projection_truncate(x, 6).coeffs, x.coeffs);
    for (std::size_t n = 1; n <= 6; ++n) EXPECT_EQ(projection_truncate(unit(6, 1), n).coeffs[0], 1.0);
    EXPECT_THROW(projection_truncate(x, 7), std::domain_error);
}

TEST(Projection, BoundSharpOnEigenvectors) {
    const std::size_t len = 16;
    const auto op = dirichlet_laplacian(len);
    for (std::size_t n = 1; n < len; ++n) {
        const auto e = unit(len, n + 1);
        const auto kept = projection_truncate(e, n);
        EXPECT_EQ(l2_norm(kept), 0.0);
        // ||(P_N - I) e_{N+1}|| = 1 = lambda_{N+1}^{-alpha/2} ||e_{N+1}||_alpha
        for (double alpha : {0.0, 1.0, 2.0}) {
            const double rhs = std::pow(op.eigenvalue(n + 1), -alpha / 2.0) * sobolev_norm(op, alpha, e);
            EXPECT_NEAR(rhs, 1.0, 1e-14);
        }
    }
}

TEST(Projection, BoundOnRandomInputs) {
    const std::size_t len = 64;
    const auto op = dirichlet_laplacian(len);
    const SpectralState x{random_vector(len, 5), 0.0};
    for (std::size_t n : {1u, 4u, 16u, 63u}) {
        SpectralState tail = x;
        for (std::size_t k = 0; k < n; ++k) tail.coeffs[k] = 0.0;
        for (double alpha : {0.0, 0.5, 1.0, 2.0}) {
            EXPECT_LE(l2_norm(tail), std::pow(op.eigenvalue(n + 1), -alpha / 2.0) * sobolev_norm(op, alpha, x));
        }
    }
}

TEST(Norms, Examples) {
    const auto op = dirichlet_laplacian(4);
    EXPECT_EQ(l2_norm(unit(4, 3)), 1.0);
    const SpectralState x{random_vector(4, 6), 0.0};
    EXPECT_EQ(sobolev_norm(op, 0.0, x), l2_norm(x));
    // ||e_2||_1 = lambda_2^{1/2} = 2 pi
    EXPECT_NEAR(sobolev_norm(op, 1.0, unit(4, 2)), 6.2831853071795862, 1e-14);
}

TEST(NoiseOperator, Kinds) {
    const auto id = DiagonalNoiseOperator::identity(5);
    for (double a : id.amplitudes()) EXPECT_EQ(a, 1.0);
    EXPECT_EQ(id.amplitude(100), 1.0);
    const auto tr = DiagonalNoiseOperator::trace_class_logsq(5);
    EXPECT_EQ(tr.amplitude(1), 0.0);
    EXPECT_NEAR(tr.amplitude(2), 1.0201394465967895, 1e-15);
    EXPECT_EQ(tr.beta(), 1.0);
    EXPECT_NEAR(tr.amplitude(50), 1.0 / std::sqrt(50.0 * std::log(50.0) * std::log(50.0)), 1e-16);
    EXPECT_THROW(DiagonalNoiseOperator::custom({1.0, -0.1}, 1.0), std::domain_error);
    EXPECT_THROW(DiagonalNoiseOperator::custom({1.0}, 1.5), std::domain_error);
    EXPECT_THROW((void)DiagonalNoiseOperator::custom({1.0}, 1.0).amplitude(2), std::domain_error);
}

TEST(NoiseOperator, BetaRangeDependsOnHurst) {
    const auto c = DiagonalNoiseOperator::custom({1.0}, -0.4);
    EXPECT_NO_THROW(c.validate(HurstParameter(0.75)));  // 1 - 2H = -0.5
    EXPECT_THROW(c.validate(HurstParameter(0.6)), std::domain_error);  // 1 - 2H = -0.2
}

TEST(NoiseRegularitySum, BaselLimit) {
    const auto op = dirichlet_laplacian(1);
    const auto id = DiagonalNoiseOperator::identity(1);
    const double s = noise_regularity_sum(op, id, 0.0, 1000000);
    EXPECT_NEAR(s, 1.0 / 6.0, 2e-7);
}

TEST(NoiseRegularitySum, TraceClassPartialSums) {
    const auto op = dirichlet_laplacian(1);
    const auto tr = DiagonalNoiseOperator::trace_class_logsq(1);
    const double s3 = noise_regularity_sum(op, tr, 1.0, 1000);
    const double s4 = noise_regularity_sum(op, tr, 1.0, 10000);
    const double s5 = noise_regularity_sum(op, tr, 1.0, 100000);
    EXPECT_LT(s3, s4);
    EXPECT_LT(s4, s5);
    EXPECT_LT(s5 - s4, s4 - s3);
    // compensated summation in double precision
    EXPECT_NEAR(s3, 1.9649884501113795, 1e-12);
    EXPECT_NEAR(s4, 2.0011697701606757, 1e-11);
    EXPECT_NEAR(s5, 2.022883942578507, 1e-10);
}

TEST(NoiseRegularitySum, IdentityDivergesAboveOneHalf) {
    const auto op = dirichlet_laplacian(1);
    const auto id = DiagonalNoiseOperator::identity(1);
    const double s3 = noise_regularity_sum(op, id, 0.6, 1000);
    const double s4 = noise_regularity_sum(op, id, 0.6, 10000);
    EXPECT_NEAR(s3, 6.191061131257803, 1e-10);
    EXPECT_GT((s4 - s3) / s3, 0.01);
}

class TransformTest : public ::testing::TestWithParam<std::size_t> {};

TEST_P(TransformTest, RoundTrip) {
    const std::size_t n = GetParam();
    const auto c = random_vector(n, 100 + n);
    const auto back = inverse_sine_transform(sine_transform(c));
    ASSERT_EQ(back.size(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(back[i], c[i], 1e-12 * norm(c));
}

TEST_P(TransformTest, MatchesDirectSum) {
    const std::size_t n = GetParam();
    const auto c = random_vector(n, 200 + n);
    const auto fast = sine_transform(c);
    const auto slow = direct_sine_transform(c);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(fast[i], slow[i], 1e-12 * norm(slow));
}

TEST_P(TransformTest, Parseval) {
    const std::size_t n = GetParam();
    const auto c = random_vector(n, 300 + n);
    const auto u = direct_sine_transform(c);
    // grid sum of squares = (N + 1) x coefficient sum of squares
    const double lhs = norm(u);
    const double rhs = std::sqrt(static_cast<double>(n + 1)) * norm(c);
    EXPECT_NEAR(lhs / rhs, 1.0, 1e-12);
    EXPECT_NEAR(norm(sine_transform(c)) / rhs, 1.0, 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Sizes, TransformTest, ::testing::Values(1u, 7u, 64u, 127u));

TEST(Transform, SingleModeValue) {
    const auto u = sine_transform(std::vector<double>{1.0});
    EXPECT_NEAR(u[0], std::sqrt(2.0), 1e-15);
    const auto x = collocation_grid(3);
    EXPECT_EQ(x.size(), 3u);
    EXPECT_DOUBLE_EQ(x[0], 0.25);
    EXPECT_DOUBLE_EQ(x[2], 0.75);
}

TEST(Nemytskii, Examples) {
    const SpectralState x{random_vector(16, 7), 0.0};
    for (double v : apply_nemytskii(NemytskiiMap::zero(), x).coeffs) EXPECT_EQ(v, 0.0);
    for (double v : apply_nemytskii(NemytskiiMap::sin(), SpectralState{std::vector<double>(16, 0.0), 0.0}).coeffs) {
        EXPECT_EQ(v, 0.0);
    }
    const auto scaled = apply_nemytskii(NemytskiiMap::scaled_identity(2.5), x);
    for (std::size_t i = 0; i < 16; ++i) EXPECT_DOUBLE_EQ(scaled.coeffs[i], 2.5 * x.coeffs[i]);
    EXPECT_THROW(NemytskiiMap::scaled_identity(0.0), std::domain_error);
}

TEST(Nemytskii, SinIsLinearForSmallInput) {
    for (std::size_t n : {1u, 8u, 33u}) {
        auto e = unit(n, 1);
        e.coeffs[0] = 1e-6;
        const auto y = apply_nemytskii(NemytskiiMap::sin(), e);
        EXPECT_NEAR(y.coeffs[0], 1e-6, 1e-12);
        for (std::size_t i = 1; i < n; ++i) EXPECT_NEAR(y.coeffs[i], 0.0, 1e-12);
    }
}

TEST(Nemytskii, SinIsOneLipschitz) {
    const NemytskiiMap f = NemytskiiMap::sin();
    for (std::uint64_t s = 0; s < 50; ++s) {
        const std::size_t n = 1 + s % 40;
        SpectralState u{random_vector(n, 400 + s), 0.0};
        SpectralState v{random_vector(n, 500 + s), 0.0};
        for (auto& c : v.coeffs) c *= 0.1 * static_cast<double>(s % 7);
        const auto fu = apply_nemytskii(f, u);
        const auto fv = apply_nemytskii(f, v);
        SpectralState du = u;
        SpectralState dfu = fu;
        for (std::size_t i = 0; i < n; ++i) {
            du.coeffs[i] -= v.coeffs[i];
            dfu.coeffs[i] -= fv.coeffs[i];
        }
        EXPECT_LE(l2_norm(dfu), f.lipschitz_bound * l2_norm(du) * (1.0 + 1e-12));
    }
}
