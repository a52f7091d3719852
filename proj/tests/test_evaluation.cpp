#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ogi/core.hpp"
#include "ogi/evaluation.hpp"

using namespace ogi;
using namespace ogi::eval;

namespace {

// Fixed 250-day hit sequence with 13 violations and a smooth VaR path.
std::vector<int> fixed_hits() {
    std::vector<int> h(250);
    for (int t = 0; t < 250; ++t) h[t] = (t * 7919 + 13) % 97 < 5 ? 1 : 0;
    return h;
}

std::vector<double> fixed_var() {
    std::vector<double> v(250);
    for (int t = 0; t < 250; ++t) v[t] = -1.0 - 0.5 * std::sin(0.1 * t);
    return v;
}

std::vector<double> saw20() {
    std::vector<double> z(20);
    for (int k = 0; k < 20; ++k) z[k] = ((k * 37 + 11) % 23) / 23.0;
    return z;
}

}  // namespace

TEST(Evaluation, MspeShiftIdentity) {
    const std::vector<double> v{1.0, 2.0, 3.0}, r{1.5, 1.0, 3.5};
    const double c = 0.7;
    std::vector<double> vs = v;
    for (double& x : vs) x += c;
    // mspe(v + c) = mspe(v) + 2c mean(v - r) + c^2
    const double md = ((1.0 - 1.5) + (2.0 - 1.0) + (3.0 - 3.5)) / 3.0;
    EXPECT_NEAR(mspe(vs, r), mspe(v, r) + 2 * c * md + c * c, 1e-14);
    EXPECT_EQ(mspe(r, r), 0.0);
}

TEST(Evaluation, QlikeMinimizedAtTruth) {
    const std::vector<double> r{0.5, 1.5, 2.0};
    const double at = qlike(r, r);
    for (double s : {0.9, 0.99, 1.01, 1.2}) {
        std::vector<double> v = r;
        for (double& x : v) x *= s;
        EXPECT_GT(qlike(v, r), at);
    }
    EXPECT_THROW(qlike({0.0, 1.0, 1.0}, r), std::invalid_argument);
    EXPECT_THROW(mspe({1.0}, r), std::invalid_argument);
}

TEST(Evaluation, BartlettOracle) {
    EXPECT_NEAR(bartlett_lrv(saw20(), 3), 0.039725897920604936, 1e-15);
}

TEST(Evaluation, DieboldMariano) {
    const auto a = saw20();
    const std::vector<double> b(20, 0.5);
    const TestResult r = dm_test(a, b);
    EXPECT_NEAR(r.stat, -0.8660521342010937, 1e-12);
    EXPECT_NEAR(r.p_value, 0.3864615725817223, 1e-12);
    const TestResult s = dm_test(b, a);
    EXPECT_NEAR(s.stat, -r.stat, 1e-15);
    EXPECT_NEAR(s.p_value, r.p_value, 1e-15);
    // Adding the same constant to both losses changes nothing.
    std::vector<double> a2 = a, b2 = b;
    for (double& x : a2) x += 3.0;
    for (double& x : b2) x += 3.0;
    EXPECT_NEAR(dm_test(a2, b2).stat, r.stat, 1e-12);
    EXPECT_THROW(dm_test(a, a), NumericalError);
    EXPECT_THROW(dm_test({1, 2, 3}, {1, 2, 4}), std::invalid_argument);
}

TEST(Evaluation, QuantileAndVar) {
    std::vector<double> x;
    for (int i = 10; i >= 1; --i) x.push_back(i);
    EXPECT_DOUBLE_EQ(quantile(x, 0.2), 2.8);
    EXPECT_DOUBLE_EQ(quantile(x, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(quantile(x, 1.0), 10.0);
    const std::vector<double> fitted(10, 1.0);
    EXPECT_NEAR(var_forecast(x, fitted, 2.0, 0.2, 10), 2.8 * std::sqrt(2.0), 1e-14);
    // Standardization: scaling returns and fitted vol together leaves z alone.
    std::vector<double> x4 = x, f4(10, 4.0);
    for (double& v : x4) v *= 2.0;
    EXPECT_NEAR(var_forecast(x4, f4, 2.0, 0.2, 10), 2.8 * std::sqrt(2.0), 1e-14);
    EXPECT_THROW(var_forecast(x, fitted, 2.0, 0.2), std::invalid_argument);
    EXPECT_THROW(var_forecast(x, fitted, 2.0, 0.7, 10), std::invalid_argument);
}

TEST(Evaluation, KupiecClosedForm) {
    std::vector<int> h(250, 0);
    for (int i = 0; i < 20; ++i) h[i * 12] = 1;
    EXPECT_NEAR(lruc(h, 0.05).stat, 4.0395204761392165, 1e-12);
    std::vector<int> exact(100, 0);
    for (int i = 0; i < 5; ++i) exact[i * 20] = 1;
    EXPECT_NEAR(lruc(exact, 0.05).stat, 0.0, 1e-12);
    EXPECT_NEAR(lruc(exact, 0.05).p_value, 1.0, 1e-9);
    const TestResult none = lruc(std::vector<int>(100, 0), 0.05);
    EXPECT_TRUE(none.corrected);
    EXPECT_TRUE(std::isfinite(none.stat));
    EXPECT_THROW(lruc(std::vector<int>(49, 0), 0.05), std::invalid_argument);
}

TEST(Evaluation, FixedSequenceOracles) {
    const auto h = fixed_hits();
    const auto uc = lruc(h, 0.05);
    EXPECT_NEAR(uc.stat, 0.02079191303159511, 1e-10);
    EXPECT_NEAR(uc.p_value, 0.8853472694426691, 1e-10);
    const auto cc = lrcc(h, 0.05);
    EXPECT_NEAR(cc.stat, 1.4537204794930654, 1e-10);
    EXPECT_NEAR(cc.p_value, 0.48342444662321105, 1e-10);
    EXPECT_NEAR(lrind(h).stat, 1.4329285664614702, 1e-10);
    const auto dq = dq_test(h, 0.05, fixed_var());
    EXPECT_NEAR(dq.stat, 3.7567588178001086, 1e-10);
    EXPECT_NEAR(dq.p_value, 0.7095537208785079, 1e-10);
}

TEST(Evaluation, AlternatingHitsFailIndependence) {
    std::vector<int> h(100);
    for (int i = 0; i < 100; ++i) h[i] = i % 2;
    const auto ind = lrind(h);
    EXPECT_GT(ind.stat, 50.0);
    EXPECT_NEAR(lrcc(h, 0.05).stat, lruc(h, 0.05).stat + ind.stat, 1e-12);
}

TEST(Evaluation, DqConstantVarIsFinite) {
    const auto h = fixed_hits();
    const auto dq = dq_test(h, 0.05, std::vector<double>(250, -1.0));
    EXPECT_TRUE(std::isfinite(dq.stat));
    EXPECT_GE(dq.stat, 0.0);
}

TEST(Evaluation, AllocationAndUtility) {
    EXPECT_EQ(mv_allocation(-0.1, 1.0, 2.0), 0.0);
    EXPECT_EQ(mv_allocation(10.0, 1.0, 2.0), 1.0);
    EXPECT_DOUBLE_EQ(mv_allocation(0.5, 1.0, 2.0), 0.25);
    EXPECT_THROW(mv_allocation(0.5, 0.0, 2.0), std::invalid_argument);

    const std::vector<double> r{0.01, -0.02, 0.03, 0.0, 0.015};
    const double m = 0.007, var = (0.003 * 0.003 + 0.027 * 0.027 + 0.023 * 0.023 + 0.007 * 0.007 + 0.008 * 0.008) / 4;
    EXPECT_NEAR(sharpe(r), m / std::sqrt(var), 1e-12);
    EXPECT_NEAR(expected_utility(r, 4.0), m - 2.0 * var, 1e-15);

    const std::vector<double> ret{1.0, 2.0, -1.0, 0.5};
    const std::vector<double> vol{9.0, 4.0, 4.0, 1.0};
    const UtilityResult u = utility_backtest(ret, vol, 1.0);
    ASSERT_EQ(u.weights.size(), 3u);
    EXPECT_DOUBLE_EQ(u.weights[0], 0.25);  // 1 / (1 * 4)
    EXPECT_DOUBLE_EQ(u.weights[1], 0.5);   // 2 / 4
    EXPECT_DOUBLE_EQ(u.weights[2], 0.0);   // negative return clipped
    EXPECT_DOUBLE_EQ(u.portfolio_returns[1], -0.5);
}

TEST(Evaluation, PersistenceRegression) {
    std::vector<double> v, r;
    for (int i = 0; i < 100; ++i) {
        v.push_back(1.0 + 0.1 * std::sin(0.3 * i));
        r.push_back(0.5 + 2.0 * v.back());
    }
    const auto ex = persistence_regression(r, v);
    EXPECT_TRUE(ex.exact_fit);
    EXPECT_NEAR(ex.a, 0.5, 1e-12);
    EXPECT_NEAR(ex.b, 2.0, 1e-12);
    EXPECT_EQ(ex.max_abs, 0.0);

    std::mt19937_64 rng(4);
    std::normal_distribution<double> z;
    std::vector<double> e(1000), vol(1000), rr(1000);
    e[0] = z(rng);
    for (int i = 1; i < 1000; ++i) e[i] = 0.5 * e[i - 1] + z(rng);
    for (int i = 0; i < 1000; ++i) {
        vol[i] = 1.0 + z(rng);
        rr[i] = 1.0 + vol[i] + e[i];
    }
    const auto p = persistence_regression(rr, vol);
    EXPECT_NEAR(p.first_lag, 0.5, 0.1);
    EXPECT_NEAR(p.b, 1.0, 0.15);
    EXPECT_THROW(persistence_regression(rr, std::vector<double>(1000, 1.0)), NumericalError);
}

TEST(Evaluation, KolmogorovSmirnov) {
    std::vector<double> s;
    for (int k = 0; k < 50; ++k) s.push_back(std::sin(1.7 * k) * 1.3);
    EXPECT_NEAR(ks_test_normal(s).d, 0.1008040523231728, 1e-12);
    const std::pair<double, double> sf[] = {{0.3, 0.9999906941986655}, {0.8, 0.5441424115741981},
                                            {1.0, 0.26999967167735456}, {1.18, 0.1234538094297657},
                                            {1.5, 0.022217962616525127}, {2.5, 7.453306344157342e-06}};
    for (auto [t, p] : sf) EXPECT_NEAR(kolmogorov_sf(t), p, 1e-12 * std::max(1.0, 1.0 / p) * p + 1e-15) << t;
}

TEST(Evaluation, RandomizedInvariants) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> len(50, 120);
    for (int c = 0; c < 10000; ++c) {
        const double w = mv_allocation(u(rng), 0.01 + std::abs(u(rng)), 0.1 + std::abs(u(rng)));
        ASSERT_GE(w, 0.0);
        ASSERT_LE(w, 1.0);
        if (c % 20 != 0) continue;
        const int n = len(rng);
        std::vector<double> ret(n), var(n);
        for (int i = 0; i < n; ++i) {
            ret[i] = u(rng);
            var[i] = -0.8 + 0.1 * u(rng);
        }
        const auto h = hits(ret, var);
        const double q0 = 0.01 + 0.2 * std::abs(u(rng));
        const auto uc = lruc(h, q0), ind = lrind(h), cc = lrcc(h, q0);
        ASSERT_GE(uc.stat, 0.0);
        ASSERT_GE(ind.stat, 0.0);
        ASSERT_NEAR(cc.stat, uc.stat + ind.stat, 1e-12 * (1 + cc.stat));
        ASSERT_GE(cc.p_value, 0.0);
        ASSERT_LE(cc.p_value, 1.0);
        const double q1 = quantile(ret, 0.1), q2 = quantile(ret, 0.2);
        ASSERT_LE(q1, q2);
        const auto d1 = dm_test(ret, var), d2 = dm_test(var, ret);
        ASSERT_NEAR(d1.stat, -d2.stat, 1e-12 * (1 + std::abs(d1.stat)));
    }
}
