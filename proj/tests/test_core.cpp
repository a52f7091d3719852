#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ogi/core.hpp"
#include "ogi/theory.hpp"

using namespace ogi;

namespace {

bool mentions(const ValidationReport& r, const std::string& s) {
    for (const auto& v : r.violations)
        if (v.find(s) != std::string::npos) return true;
    return false;
}

// Largest singular value by power iteration on M^T M.
double power_norm(const Matrix2& m) {
    const double a = m[0][0] * m[0][0] + m[1][0] * m[1][0];
    const double b = m[0][0] * m[0][1] + m[1][0] * m[1][1];
    const double d = m[0][1] * m[0][1] + m[1][1] * m[1][1];
    double x = 1.0, y = 0.618;
    double lam = 0.0;
    for (int it = 0; it < 2000; ++it) {
        const double nx = a * x + b * y, ny = b * x + d * y;
        const double n = std::hypot(nx, ny);
        if (n == 0.0) return 0.0;
        x = nx / n;
        y = ny / n;
        lam = x * (a * x + b * y) + y * (b * x + d * y);
    }
    return std::sqrt(lam);
}

}  // namespace

TEST(Core, ReferenceThetaIsValid) {
    const auto r = validate_full_theta(FullTheta::reference());
    EXPECT_TRUE(r.ok()) << r.to_string();
    const auto t = FullTheta::reference();
    EXPECT_DOUBLE_EQ(t.omega_H1, 0.02);
    EXPECT_DOUBLE_EQ(t.beta_L, 0.1);
    EXPECT_DOUBLE_EQ(t.nu_L, 0.2);
}

TEST(Core, AlphaHOutsideUnitIntervalIsReported) {
    auto t = FullTheta::reference();
    t.alpha_H = 1.5;
    const auto r = validate_full_theta(t);
    EXPECT_FALSE(r.ok());
    EXPECT_TRUE(mentions(r, "alpha_H")) << r.to_string();
}

TEST(Core, NegativeNuLIsReported) {
    auto t = FullTheta::reference();
    t.nu_L = -0.1;
    const auto r = validate_full_theta(t);
    ASSERT_EQ(r.violations.size(), 1u);
    EXPECT_TRUE(mentions(r, "nu_L < 0"));
}

TEST(Core, EveryViolationIsListed) {
    auto t = FullTheta::reference();
    t.alpha_H = 0.0;
    t.beta_L = 2.0;
    t.gamma_H = -1.0;
    t.nu_H = -1.0;
    const auto r = validate_full_theta(t);
    EXPECT_TRUE(mentions(r, "alpha_H"));
    EXPECT_TRUE(mentions(r, "beta_L"));
    EXPECT_TRUE(mentions(r, "gamma_H"));
    EXPECT_TRUE(mentions(r, "nu_H"));
}

TEST(Core, SimulationDomainAllowsZeroFeedback) {
    FullTheta t;
    t.omega_L = 1e-4;
    EXPECT_FALSE(validate_full_theta(t).ok());
    EXPECT_TRUE(validate_for_simulation(t).ok());
}

TEST(Core, SpectralNormSimpleCases) {
    EXPECT_DOUBLE_EQ(spectral_norm_2x2({{{1, 0}, {0, 1}}}), 1.0);
    EXPECT_DOUBLE_EQ(spectral_norm_2x2({{{2, 0}, {0, 0}}}), 2.0);
    EXPECT_DOUBLE_EQ(spectral_norm_2x2({{{0, 0}, {0, 0}}}), 0.0);
    // numpy.linalg.norm(..., 2)
    EXPECT_NEAR(spectral_norm_2x2({{{1, 2}, {3, 4}}}), 5.464985704219043, 1e-13);
    EXPECT_NEAR(spectral_norm_2x2({{{0.57, 0.128}, {0.202, 0.456}}}), 0.6889006155416614, 1e-13);
}

TEST(Core, ReferenceMeanRecursionIsContraction) {
    const GarchTheta g = theory::map_theta_to_garch(FullTheta::reference());
    const double n = spectral_norm_2x2(mean_recursion_matrix(g));
    EXPECT_LT(n, 1.0);
    EXPECT_NEAR(n, 0.6901, 5e-4);
    EXPECT_TRUE(validate_garch_theta(g, kDefaultLambda).ok());
    // The version with 1/lambda factors is not a contraction at the same point.
    EXPECT_GT(spectral_norm_2x2(printed_stationarity_matrix(g, kDefaultLambda)), 1.0);
    EXPECT_FALSE(validate_garch_theta(g, kDefaultLambda, {}, StationarityMatrix::Printed).ok());
}

TEST(Core, SpectralNormMatchesPowerIteration) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 1000; ++i) {
        const Matrix2 m{{{u(rng), u(rng)}, {u(rng), u(rng)}}};
        const double ref = power_norm(m);
        EXPECT_NEAR(spectral_norm_2x2(m), ref, 1e-12 * std::max(1.0, ref)) << i;
    }
}

TEST(Core, GarchThetaBoxViolations) {
    GarchTheta g = theory::map_theta_to_garch(FullTheta::reference());
    g.gamma = 1.0;
    const auto r = validate_garch_theta(g, kDefaultLambda);
    EXPECT_TRUE(mentions(r, "gamma")) << r.to_string();
    const auto a = g.to_array();
    const auto back = GarchTheta::from_array(a);
    EXPECT_EQ(back.to_array(), a);
}

TEST(Core, DaySeriesDerivedReturns) {
    DaySeries s;
    const double lam = kDefaultLambda;
    const double opens[] = {0.0, 0.01, -0.02};
    const double closes[] = {0.005, 0.03, -0.01};
    for (int d = 1; d <= 3; ++d) {
        MarketDay m;
        m.day_index = d;
        m.tick_times = {session_open_time(d), session_open_time(d) + lam / 2, session_close_time(d, lam)};
        m.tick_logprices = {opens[d - 1], 0.5 * (opens[d - 1] + closes[d - 1]), closes[d - 1]};
        m.open_logprice = opens[d - 1];
        m.close_logprice = closes[d - 1];
        s.days.push_back(m);
    }
    EXPECT_NO_THROW(s.check(lam));
    const auto ov = s.overnight_returns();
    ASSERT_EQ(ov.size(), 2u);
    EXPECT_DOUBLE_EQ(ov[0], 0.01 - 0.005);
    EXPECT_DOUBLE_EQ(ov[1], -0.02 - 0.03);
    EXPECT_DOUBLE_EQ(s.overnight_return_sq()[1], (-0.05) * (-0.05));
    EXPECT_DOUBLE_EQ(s.open_to_open_returns()[0], 0.01);
    EXPECT_DOUBLE_EQ(s.intraday_returns()[0], 0.005);
    EXPECT_EQ(s.days[0].increments(), 2u);
}

TEST(Core, MarketDayChecks) {
    MarketDay m;
    m.day_index = 2;
    m.tick_times = {1.0, 1.1};
    m.tick_logprices = {0.0, 0.0};
    EXPECT_THROW(check_market_day(m, kDefaultLambda), std::invalid_argument);  // close time off
    m.tick_times = {1.0, session_close_time(2, kDefaultLambda)};
    EXPECT_NO_THROW(check_market_day(m, kDefaultLambda));
    m.tick_times = {1.0};
    m.tick_logprices = {0.0};
    EXPECT_THROW(check_market_day(m, kDefaultLambda), std::invalid_argument);
}

TEST(Core, SampleMoments) {
    EXPECT_DOUBLE_EQ(sample_mean({1, 2, 3, 4}), 2.5);
    EXPECT_DOUBLE_EQ(sample_variance({1, 2, 3, 4}), 5.0 / 3.0);
    EXPECT_THROW(sample_variance({1}), std::invalid_argument);
}
