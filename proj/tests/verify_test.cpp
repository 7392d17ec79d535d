#include <gtest/gtest.h>

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <vector>

#include "fracspde/experiments/presets.hpp"
#include "fracspde/experiments/statistics.hpp"
#include "fracspde/verify/checks.hpp"
#include "fracspde/verify/quadrature.hpp"
#include "fracspde/verify/regularity.hpp"
#include "fracspde/verify/suites.hpp"

using namespace fracspde;
using namespace fracspde::verify;

TEST(PhiCell, Diagonal) {
    for (double h : {0.55, 0.75, 0.95}) {
        const auto c = check_phi_cell_integral(4, 4, HurstParameter(h));
        EXPECT_EQ(c.analytic, 1.0);
        EXPECT_NEAR(c.quadrature, 1.0, 1e-6) << "H=" << h;
        EXPECT_FALSE(c.bound_applicable);
    }
}

TEST(PhiCell, OffDiagonalAgainstQuadrature) {
    for (double h : {0.55, 0.75, 0.95}) {
        for (std::size_t k = 1; k <= 10; ++k) {
            const auto c = check_phi_cell_integral(1, 1 + k, HurstParameter(h));
            EXPECT_NEAR(c.quadrature / c.analytic, 1.0, 1e-6) << "H=" << h << " k=" << k;
            EXPECT_TRUE(c.bound_holds);
        }
    }
    const auto c1 = check_phi_cell_integral(1, 0, HurstParameter(0.75));
    EXPECT_NEAR(c1.analytic, 0.41421356237309515, 1e-15);
}

TEST(PhiCell, BoundExample) {
    const auto c = check_phi_cell_integral(5, 0, HurstParameter(0.75));
    EXPECT_FALSE(c.bound_applicable);
    const auto d = check_phi_cell_integral(5, 1, HurstParameter(0.75));
    ASSERT_TRUE(d.bound_applicable);
    EXPECT_NEAR(d.bound, 0.5 * std::sqrt(5.0), 1e-15);
    EXPECT_TRUE(d.bound_holds);
    EXPECT_LT(d.analytic, 0.5 * d.bound);
}

// The bound needs both indices >= 1: at j = 0 the lag-1 cell for H = 0.95
// exceeds 1/2 max(i, j)^{2H-1}.
TEST(PhiCell, BoundNotApplicableAtIndexZero) {
    const HurstParameter h(0.95);
    EXPECT_GT(fgn_autocovariance(1, h), 0.5);
    EXPECT_FALSE(check_phi_cell_integral(1, 0, h).bound_applicable);
}

TEST(Quadrature, GaussLegendrePolynomialExactness) {
    const double v = tensor_gauss_legendre([](double u, double w) { return std::pow(u, 10) * std::pow(w, 7); }, 0.0,
                                           2.0, -1.0, 1.0);
    EXPECT_NEAR(v, 0.0, 1e-12);  // odd power on a symmetric interval
    const double w = tensor_gauss_legendre([](double u, double x) { return u * u * x * x * x * x; }, 0.0, 1.0, 0.0, 2.0);
    EXPECT_NEAR(w, (1.0 / 3.0) * (32.0 / 5.0), 1e-13);
}

TEST(Quadrature, SingularSquareMatchesClosedForm) {
    // int_0^T int_0^T |u - v|^{2H-2} alpha du dv = T^{2H}
    for (double h : {0.55, 0.75, 0.95}) {
        const HurstParameter hp(h);
        EXPECT_NEAR(phi_square_integral([](double, double) { return 1.0; }, 0.0, 2.0, hp), std::pow(2.0, 2.0 * h),
                    1e-9);
    }
}

// G(z) = int_0^z int_0^z a^k1 b^k2 e^{-(a+b)} phi(a - b) da db at H = 3/4,
// computed with 20-digit adaptive quadrature.
TEST(LambdaPhi, MatchesReferenceValues) {
    const HurstParameter h(0.75);
    EXPECT_NEAR(check_lambda_phi_bound(10.0, 1.0, 0, 0, h), 0.66465933589763149, 1e-7);
    EXPECT_NEAR(check_lambda_phi_bound(10.0, 1.0, 1, 0, h), 0.49843739350223847, 1e-7);
    EXPECT_NEAR(check_lambda_phi_bound(10.0, 1.0, 1, 1, h), 0.49837613202062383, 1e-7);
    EXPECT_NEAR(check_lambda_phi_bound(1000.0, 1.0, 0, 0, h), 0.66467019408956828, 1e-7);
    EXPECT_NEAR(check_lambda_phi_bound(1000.0, 1.0, 0, 1, h), 0.49850264556717619, 1e-7);
    EXPECT_NEAR(check_lambda_phi_bound(1000.0, 1.0, 1, 1, h), 0.49850264556717613, 1e-7);
}

TEST(LambdaPhi, DependsOnProductOnly) {
    const HurstParameter h(0.75);
    EXPECT_NEAR(check_lambda_phi_bound(100.0, 0.1, 1, 0, h), check_lambda_phi_bound(10.0, 1.0, 1, 0, h), 1e-9);
}

TEST(LambdaPhi, BoundedAcrossLambdaAndHorizon) {
    const HurstParameter h(0.75);
    for (int k1 : {0, 1}) {
        for (int k2 : {0, 1}) {
            const double plateau = check_lambda_phi_bound(1e4, 10.0, k1, k2, h);
            for (double t : {0.1, 1.0, 10.0}) {
                for (double lambda : {1.0, 10.0, 1e2, 1e3, 1e4}) {
                    EXPECT_LE(check_lambda_phi_bound(lambda, t, k1, k2, h), plateau * (1.0 + 1e-9));
                }
            }
        }
    }
}

TEST(LambdaPhi, SmallProductIsSmall) {
    // exponential ~ 1: lambda^{2H} t^{2H} x (int int phi) = (lambda t)^{2H}
    const HurstParameter h(0.75);
    EXPECT_NEAR(check_lambda_phi_bound(1e-3, 1.0, 0, 0, h), std::pow(1e-3, 1.5), 1e-7);
}

TEST(LambdaPhi, RejectsBadArguments) {
    const HurstParameter h(0.75);
    EXPECT_THROW(check_lambda_phi_bound(0.0, 1.0, 0, 0, h), std::domain_error);
    EXPECT_THROW(check_lambda_phi_bound(1.0, 1.0, 2, 0, h), std::domain_error);
}

// sup over lambda of lambda^{2 delta} int int e^{-lambda(u + v)} phi over
// [0, lag]^2 scales like lag^{2(H - delta)}.
TEST(SemigroupPhi, ScalingExponent) {
    const HurstParameter h(0.75);
    for (double delta : {0.0, 0.25, 0.5}) {
        std::vector<double> lags;
        std::vector<double> sups;
        for (double lag : {1e-3, 1e-2, 1e-1}) {
            double sup = 0.0;
            for (int j = -6; j <= 10; ++j) sup = std::max(sup, semigroup_phi_integral(std::ldexp(1.0, j) / lag, lag, delta, h));
            lags.push_back(lag);
            sups.push_back(sup);
        }
        EXPECT_NEAR(experiments::fit_slope(lags, sups).slope, 2.0 * (0.75 - delta), 1e-6) << "delta=" << delta;
    }
}

TEST(Isometry, SingleStepScalar) {
    const auto grid = IncrementGrid(1, 0.5);
    const HurstParameter h(0.75);
    const std::vector<Eigen::MatrixXd> psi{Eigen::MatrixXd::Constant(1, 1, 3.0)};
    const auto r = check_ito_isometry(psi, grid, h, 20000, 1);
    EXPECT_NEAR(r.analytic_rhs, 9.0 * std::pow(0.5, 1.5), 1e-14);
    EXPECT_NEAR(r.mc_lhs, r.analytic_rhs, 3.0 * r.std_error);
}

TEST(Isometry, TwoStepsTelescope) {
    const auto grid = IncrementGrid(2, 1.0);
    const std::vector<Eigen::MatrixXd> psi(2, Eigen::MatrixXd::Ones(1, 1));
    const auto r = check_ito_isometry(psi, grid, HurstParameter(0.75), 10000, 2);
    EXPECT_NEAR(r.analytic_rhs, 2.8284271247461903, 1e-14);
    EXPECT_NEAR(r.analytic_rhs, std::pow(2.0, 1.5), 1e-14);
    EXPECT_NEAR(r.mc_lhs, r.analytic_rhs, 3.0 * r.std_error);
}

TEST(Isometry, ZeroIntegrand) {
    const auto grid = IncrementGrid(3, 0.1);
    const std::vector<Eigen::MatrixXd> psi(3, Eigen::MatrixXd::Zero(2, 2));
    const auto r = check_ito_isometry(psi, grid, HurstParameter(0.6), 100, 3);
    EXPECT_EQ(r.mc_lhs, 0.0);
    EXPECT_EQ(r.analytic_rhs, 0.0);
}

TEST(Isometry, ShapeMismatch) {
    const auto grid = IncrementGrid(3, 0.1);
    EXPECT_THROW(check_ito_isometry(std::vector<Eigen::MatrixXd>(2, Eigen::MatrixXd::Ones(1, 1)), grid,
                                    HurstParameter(0.6), 100, 3),
                 std::domain_error);
    std::vector<Eigen::MatrixXd> ragged{Eigen::MatrixXd::Ones(1, 1), Eigen::MatrixXd::Ones(1, 2),
                                        Eigen::MatrixXd::Ones(1, 1)};
    EXPECT_THROW(check_ito_isometry(ragged, grid, HurstParameter(0.6), 100, 3), std::domain_error);
}

TEST(Isometry, WorkerCountDoesNotChangeResult) {
    const auto grid = IncrementGrid(4, 0.25);
    std::vector<Eigen::MatrixXd> psi(4, Eigen::MatrixXd::Ones(2, 3));
    psi[1](0, 2) = -0.5;
    const auto a = check_ito_isometry(psi, grid, HurstParameter(0.7), 2000, 9, FbmMethod::circulant, 1);
    const auto b = check_ito_isometry(psi, grid, HurstParameter(0.7), 2000, 9, FbmMethod::circulant, 3);
    EXPECT_EQ(a.mc_lhs, b.mc_lhs);
    EXPECT_EQ(a.std_error, b.std_error);
}

TEST(Regularity, ExactPowerLawFit) {
    const std::vector<double> lags{0.01, 0.02, 0.04, 0.08};
    std::vector<double> rms;
    for (double l : lags) rms.push_back(3.0 * std::pow(l, 0.37));
    EXPECT_NEAR(fit_regularity_exponent(lags, rms), 0.37, 1e-12);
}

TEST(Regularity, TimeReportShape) {
    const auto cfg = experiments::she_preset("she-trace", 16, 256, 1.0, 3);
    const auto r = estimate_time_regularity(cfg, 0.0, {4, 8, 16, 32}, 20);
    EXPECT_DOUBLE_EQ(r.theoretical_exponent, 0.75);
    ASSERT_EQ(r.lag_times.size(), 4u);
    EXPECT_DOUBLE_EQ(r.lag_times[0], 4.0 / 256.0);
    for (double v : r.rms_differences) EXPECT_GT(v, 0.0);
    EXPECT_TRUE(std::isfinite(r.fitted_exponent));
    EXPECT_EQ(r.sample_count, 20u);
    const auto id = experiments::she_preset("she-identity", 16, 256, 1.0, 3);
    EXPECT_DOUBLE_EQ(estimate_time_regularity(id, 0.0, {4, 8, 16}, 4).theoretical_exponent, 0.5);
}

TEST(Regularity, TimeArgumentChecks) {
    const auto cfg = experiments::she_preset("she-trace", 8, 64, 1.0, 3);
    EXPECT_THROW(estimate_time_regularity(cfg, 0.0, {4, 8}, 4), std::domain_error);
    EXPECT_THROW(estimate_time_regularity(cfg, 0.0, {4, 8, 64}, 4), std::domain_error);
    EXPECT_THROW(estimate_time_regularity(cfg, 0.0, {8, 4, 16}, 4), std::domain_error);
    EXPECT_THROW(estimate_time_regularity(cfg, 1.5, {4, 8, 16}, 4), std::domain_error);
    EXPECT_THROW(estimate_time_regularity(cfg, -0.1, {4, 8, 16}, 4), std::domain_error);
}

TEST(Regularity, SpaceLadderDeterministicWithoutNoise) {
    auto cfg = experiments::she_preset("she-trace", 32, 1024, 0.05, 1);
    cfg.noise = DiagonalNoiseOperator::zero(32);
    cfg.nonlinearity = NemytskiiMap::zero();
    const std::vector<std::size_t> ladder{4, 8, 16, 32};
    const auto r = estimate_space_regularity(cfg, {0.0, 1.0}, ladder, 3);
    const double lam = std::numbers::pi * std::numbers::pi;
    for (std::size_t l = 0; l < ladder.size(); ++l) {
        EXPECT_EQ(r.steps[l], 1024 / ((32 / ladder[l]) * (32 / ladder[l])));
        const double tau = 0.05 / static_cast<double>(r.steps[l]);
        const double x1 = std::pow(1.0 + tau * lam, -static_cast<double>(r.steps[l])) / std::sqrt(2.0);
        EXPECT_NEAR(r.probes[0].rms_norms[l], x1, 1e-12 * x1);
        EXPECT_NEAR(r.probes[1].rms_norms[l], std::sqrt(lam) * x1, 1e-12 * std::sqrt(lam) * x1);
    }
    EXPECT_DOUBLE_EQ(r.threshold, 1.5);
}

TEST(Regularity, SpaceArgumentChecks) {
    const auto cfg = experiments::she_preset("she-trace", 32, 1024, 0.05, 1);
    EXPECT_THROW(estimate_space_regularity(cfg, {1.0}, {8, 16, 32}, 2), std::domain_error);
    EXPECT_THROW(estimate_space_regularity(cfg, {1.0}, {4, 8, 16, 24}, 2), std::domain_error);
    EXPECT_THROW(estimate_space_regularity(cfg, {1.0}, {2, 4, 8, 16}, 2), std::domain_error);
    EXPECT_THROW(estimate_space_regularity(cfg.with_steps(1000), {1.0}, {4, 8, 16, 32}, 2), std::domain_error);
}

TEST(Suites, PhiAndLambdaPhiPass) {
    const auto phi = phi_suite();
    EXPECT_EQ(phi.checks.size(), 33u);
    for (const auto& c : phi.checks) EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
    const auto lp = lambda_phi_suite();
    EXPECT_EQ(lp.checks.size(), 4u);
    EXPECT_TRUE(lp.passed());
    const auto j = to_json(lp);
    EXPECT_EQ(j["suite"], "lambda-phi");
    EXPECT_EQ(j["checks"].size(), 4u);
}

TEST(Suites, CovarianceCheckCountsExceedances) {
    const auto c = check_fbm_covariance(8, HurstParameter(0.75), 4000, 2, FbmMethod::circulant);
    EXPECT_EQ(c.entries, 36u);
    EXPECT_TRUE(c.passed);
    EXPECT_GE(c.allowed, 1u);
}
