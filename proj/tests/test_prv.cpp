#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ogi/prv.hpp"
#include "ogi/simulator.hpp"

using namespace ogi;
using namespace ogi::prv;

namespace {

MarketDay make_day(const std::vector<double>& y, int day_index = 1, double lambda = kDefaultLambda) {
    MarketDay d;
    d.day_index = day_index;
    const double m = static_cast<double>(y.size() - 1);
    for (std::size_t i = 0; i < y.size(); ++i)
        d.tick_times.push_back(session_open_time(day_index) + lambda * static_cast<double>(i) / m);
    d.tick_times.back() = session_close_time(day_index, lambda);
    d.tick_logprices = y;
    d.open_logprice = y.front();
    d.close_logprice = y.back();
    return d;
}

// Brownian path with daily session variance iv over m increments.
std::vector<double> brownian(std::size_t m, double iv, std::mt19937_64& rng) {
    std::normal_distribution<double> z(0.0, std::sqrt(iv / static_cast<double>(m)));
    std::vector<double> y(m + 1, 0.0);
    for (std::size_t i = 1; i <= m; ++i) y[i] = y[i - 1] + z(rng);
    return y;
}

double sum_sq(const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 1; i < y.size(); ++i) s += (y[i] - y[i - 1]) * (y[i] - y[i - 1]);
    return s;
}

}  // namespace

TEST(Prv, WeightAndPsi) {
    EXPECT_EQ(triangle(0.25), 0.25);
    EXPECT_EQ(triangle(0.75), 0.25);
    EXPECT_DOUBLE_EQ(psi(nullptr), 1.0 / 12.0);
    EXPECT_NEAR(psi([](double x) { return std::sin(std::numbers::pi * x); }), 0.5, 1e-10);
    EXPECT_NEAR(psi([](double x) { return x * (1 - x); }), 1.0 / 30.0, 1e-12);
    EXPECT_THROW(psi([](double) { return 0.0; }), std::invalid_argument);
}

TEST(Prv, Bandwidth) {
    PrvConfig c;
    EXPECT_EQ(c.bandwidth(2340), 48);
    EXPECT_EQ(c.bandwidth(390), 19);
    c.K = 5;
    EXPECT_EQ(c.bandwidth(10), 5);
    EXPECT_THROW(c.bandwidth(4), std::invalid_argument);
    c.K = 1;
    EXPECT_THROW(c.bandwidth(10), std::invalid_argument);
}

TEST(Prv, ConstantPricesGiveZero) {
    const std::vector<double> y(101, 4.2);
    for (double v : preaverage(y, 10)) EXPECT_EQ(v, 0.0);
    const PrvResult r = prv::prv(make_day(y), PrvConfig{}, 1.0);
    EXPECT_EQ(r.rv, 0.0);
    EXPECT_FALSE(r.floored);
    DaySeries s;
    s.days = {make_day(y, 1), make_day(y, 2)};
    for (const auto& d : prv_series(s, PrvConfig{})) EXPECT_EQ(d.rv, 0.0);
}

TEST(Prv, LinearPriceHandSum) {
    std::vector<double> y(21);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = 0.003 * static_cast<double>(i);
    const auto yb = preaverage(y, 4);
    ASSERT_EQ(yb.size(), 20u - 4u + 1u);
    for (double v : yb) EXPECT_NEAR(v, 0.003 * (0.25 + 0.5 + 0.25), 1e-16);
}

TEST(Prv, SpikeTouchesKMinusOneWindows) {
    const int K = 7;
    std::vector<double> y(61, 0.0);
    for (std::size_t i = 30; i < y.size(); ++i) y[i] = 1.0;  // one nonzero increment
    const auto yb = preaverage(y, K);
    int nonzero = 0;
    for (double v : yb) nonzero += v != 0.0;
    EXPECT_EQ(nonzero, K - 1);
}

TEST(Prv, NoiseCorrectionTerms) {
    // Increments 1, 2, 3, 4 with K = 2: weights (g(1/2)-g(0))^2 = (g(1)-g(1/2))^2 = 1/4.
    const std::vector<double> y{0, 1, 3, 6, 10};
    const auto nc = noise_correction(y, 2);
    ASSERT_EQ(nc.size(), 3u);
    EXPECT_DOUBLE_EQ(nc[0], 0.25 * (1 + 4));
    EXPECT_DOUBLE_EQ(nc[2], 0.25 * (9 + 16));
    const auto pa = preaverage(y, 2);
    // The first increment of each block carries g(0) = 0.
    EXPECT_DOUBLE_EQ(pa[0], 0.5 * 2);
    EXPECT_DOUBLE_EQ(pa[2], 0.5 * 4);
    EXPECT_THROW(preaverage({0, 1}, 2), std::invalid_argument);
}

TEST(Prv, CtauFromData) {
    const double a = 0.37;
    const double c3 = ctau_from_data({-a, a}, 3.0, 16, 0.125);
    EXPECT_NEAR(c3, 3.0 * std::pow(16.0, 0.125) * a * std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(ctau_from_data({-a, a}, 10.0, 16, 0.125) / c3, 10.0 / 3.0, 1e-15);
    EXPECT_EQ(ctau_from_data({0.0, 0.0, 0.0}, 3.0, 16, 0.25), 0.0);
    EXPECT_THROW(ctau_from_data({1.0}, 3.0, 16, 0.25), std::invalid_argument);
}

TEST(Prv, ScaleEquivarianceWithoutTruncation) {
    std::mt19937_64 rng(1);
    const auto y = brownian(780, 1e-4, rng);
    std::vector<double> y3(y);
    for (double& v : y3) v *= 3.0;
    PrvConfig c;
    c.truncate = false;
    const double a = prv::prv(make_day(y), c, 0.0).rv, b = prv::prv(make_day(y3), c, 0.0).rv;
    EXPECT_NEAR(b / a, 9.0, 1e-12);
}

TEST(Prv, HugeThresholdIsNoTruncation) {
    std::mt19937_64 rng(2);
    const auto y = brownian(780, 1e-4, rng);
    PrvConfig off;
    off.truncate = false;
    const PrvResult a = prv::prv(make_day(y), PrvConfig{}, 1e300), b = prv::prv(make_day(y), off, 0.0);
    EXPECT_EQ(a.rv, b.rv);
    EXPECT_EQ(a.truncated, 0);
}

TEST(Prv, NegativeEstimateIsFloored) {
    // Alternating increments: noise correction outweighs the pre-averaged sum.
    std::vector<double> y(101);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = (i % 2) ? 1e-3 : 0.0;
    PrvConfig c;
    c.K = 10;
    c.truncate = false;
    const PrvResult r = prv::prv(make_day(y), c, 0.0);
    EXPECT_TRUE(r.floored);
    EXPECT_EQ(r.rv, c.floor);
}

TEST(Prv, UnbiasedOnNoiselessBrownianDays) {
    const double iv = 1e-4;
    std::mt19937_64 rng(3);
    DaySeries s;
    std::vector<double> ss;
    for (int d = 1; d <= 200; ++d) {
        auto y = brownian(2340, iv, rng);
        ss.push_back(sum_sq(y));
        s.days.push_back(make_day(y, d));
    }
    const auto rv = values(prv_series(s, PrvConfig{}));
    const double m = sample_mean(rv), se = std::sqrt(sample_variance(rv) / rv.size());
    EXPECT_LT(std::abs(m - iv), 5.0 * se) << m << " se " << se;
    // Sum of squared returns on the same noiseless paths is the reference estimate.
    EXPECT_LT(std::abs(m - sample_mean(ss)), 5.0 * se);
}

TEST(Prv, RobustToSingleJump) {
    const double iv = 1e-4;
    std::mt19937_64 rng(4);
    DaySeries clean;
    for (int d = 1; d <= 200; ++d) clean.days.push_back(make_day(brownian(2340, iv, rng), d));
    PrvConfig cfg;
    cfg.ctau = pooled_ctau(clean, cfg);

    MarketDay day = clean.days[17];
    const double before = prv::prv(day, cfg, *cfg.ctau).rv;
    const double ss_before = sum_sq(day.tick_logprices);
    for (std::size_t i = 1000; i < day.tick_logprices.size(); ++i) day.tick_logprices[i] += 0.05;
    day.close_logprice = day.tick_logprices.back();
    const PrvResult after = prv::prv(day, cfg, *cfg.ctau);
    EXPECT_LT(std::abs(after.rv - before), 0.1 * before);
    EXPECT_GT(after.truncated, 0);
    EXPECT_NEAR(sum_sq(day.tick_logprices) - ss_before, 0.0025, 0.0025 * 0.05);
}

TEST(Prv, ErrorShrinksWithSamplingFrequency) {
    sim::SimConfig c;
    c.n_days = 200;
    c.m_obs = 2340;
    c.seed = 12;
    c.jump.intensity_per_session = 0.0;
    const sim::SimOutput out = sim::simulate(c);
    const auto iv = out.kept(out.truth.iv_H);
    sim::NoiseConfig none;
    none.rel_scale = 0.0;
    double prev = INFINITY;
    for (int m : {390, 1170, 2340}) {
        const auto est = values(prv_series(sim::make_observations(out, none, m, 1), PrvConfig{}));
        double mae = 0.0;
        for (std::size_t i = 0; i < est.size(); ++i) mae += std::abs(est[i] - iv[i]);
        mae /= static_cast<double>(est.size());
        EXPECT_LT(mae, prev) << m;
        prev = mae;
    }
}

TEST(Prv, PerDayAndFixedThresholds) {
    std::mt19937_64 rng(5);
    DaySeries s;
    for (int d = 1; d <= 3; ++d) s.days.push_back(make_day(brownian(390, 1e-4 * d, rng), d));
    PrvConfig per;
    per.per_day_ctau = true;
    const auto r = prv_series(s, per);
    ASSERT_EQ(r.size(), 3u);
    for (int d = 0; d < 3; ++d) EXPECT_EQ(r[d].day_index, d + 1);
    PrvConfig fixed;
    fixed.ctau = 1e300;
    for (const auto& x : prv_series(s, fixed)) EXPECT_EQ(x.truncated, 0);
}
