#include "ogi/evaluation.hpp"

#include <gsl/gsl_cdf.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ogi/core.hpp"

namespace ogi::eval {

namespace {

void require_aligned(std::size_t a, std::size_t b, const char* who) {
    if (a != b)
        throw std::invalid_argument(std::string(who) + ": length mismatch (" + std::to_string(a) + " vs " +
                                    std::to_string(b) + ")");
    if (a == 0) throw std::invalid_argument(std::string(who) + ": empty input");
}

double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

void check_hits(const std::vector<int>& h, const char* who) {
    if (h.size() < kBacktestMinObs)
        throw std::invalid_argument(std::string(who) + ": need at least " + std::to_string(kBacktestMinObs) +
                                    " observations");
    for (int v : h)
        if (v != 0 && v != 1) throw std::invalid_argument(std::string(who) + ": hits must be 0 or 1");
}

void check_q0(double q0, const char* who) {
    if (!(q0 > 0.0 && q0 < 1.0)) throw std::invalid_argument(std::string(who) + ": q0 must lie in (0, 1)");
}

}  // namespace

std::vector<double> squared_errors(const std::vector<double>& vol, const std::vector<double>& realized) {
    require_aligned(vol.size(), realized.size(), "mspe");
    std::vector<double> e(vol.size());
    for (std::size_t i = 0; i < vol.size(); ++i) e[i] = (vol[i] - realized[i]) * (vol[i] - realized[i]);
    return e;
}

std::vector<double> qlike_terms(const std::vector<double>& vol, const std::vector<double>& realized) {
    require_aligned(vol.size(), realized.size(), "qlike");
    std::vector<double> e(vol.size());
    for (std::size_t i = 0; i < vol.size(); ++i) {
        if (!(vol[i] > 0.0))
            throw std::invalid_argument("qlike: forecast " + std::to_string(i) + " is not positive");
        if (realized[i] < 0.0) throw std::invalid_argument("qlike: negative realized value");
        e[i] = std::log(vol[i]) + realized[i] / vol[i];
    }
    return e;
}

double mspe(const std::vector<double>& vol, const std::vector<double>& realized) {
    return sample_mean(squared_errors(vol, realized));
}

double qlike(const std::vector<double>& vol, const std::vector<double>& realized) {
    return sample_mean(qlike_terms(vol, realized));
}

double bartlett_lrv(const std::vector<double>& x, int lag) {
    const std::size_t n = x.size();
    const double m = sample_mean(x);
    auto gamma = [&](std::size_t k) {
        double s = 0.0;
        for (std::size_t t = k; t < n; ++t) s += (x[t] - m) * (x[t - k] - m);
        return s / n;
    };
    double v = gamma(0);
    for (int k = 1; k <= lag && static_cast<std::size_t>(k) < n; ++k)
        v += 2.0 * (1.0 - k / (lag + 1.0)) * gamma(k);
    return v;
}

TestResult dm_test(const std::vector<double>& a, const std::vector<double>& b, std::optional<int> hac_lag) {
    require_aligned(a.size(), b.size(), "dm_test");
    const std::size_t n = a.size();
    if (n < kDmMinObs) throw std::invalid_argument("dm_test: need at least 10 observations");
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
    const int lag = hac_lag ? *hac_lag : static_cast<int>(std::floor(std::cbrt(static_cast<double>(n))));
    if (lag < 0) throw std::invalid_argument("dm_test: negative HAC lag");
    const double v = bartlett_lrv(d, lag);
    if (!(v > 0.0)) throw NumericalError("dm_test: identical losses, loss differential has zero variance");
    TestResult r;
    r.stat = sample_mean(d) / std::sqrt(v / n);
    r.p_value = 2.0 * gsl_cdf_ugaussian_Q(std::abs(r.stat));
    return r;
}

double quantile(std::vector<double> x, double q) {
    if (x.empty()) throw std::invalid_argument("quantile: empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile: level outside [0, 1]");
    std::sort(x.begin(), x.end());
    const double h = (x.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, x.size() - 1);
    return x[lo] + (h - lo) * (x[hi] - x[lo]);
}

double var_forecast(const std::vector<double>& returns, const std::vector<double>& fitted, double forecast,
                    double q0, std::size_t min_in_sample) {
    if (!(q0 > 0.0 && q0 <= 0.5)) throw std::invalid_argument("var_forecast: q0 must lie in (0, 0.5]");
    require_aligned(returns.size(), fitted.size(), "var_forecast");
    if (returns.size() < min_in_sample)
        throw std::invalid_argument("var_forecast: need at least " + std::to_string(min_in_sample) +
                                    " in-sample days");
    if (!(forecast > 0.0)) throw std::invalid_argument("var_forecast: forecast must be positive");
    std::vector<double> z(returns.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (!(fitted[i] > 0.0)) throw std::invalid_argument("var_forecast: fitted volatility must be positive");
        z[i] = returns[i] / std::sqrt(fitted[i]);
    }
    return quantile(std::move(z), q0) * std::sqrt(forecast);
}

std::vector<int> hits(const std::vector<double>& returns, const std::vector<double>& var_series) {
    require_aligned(returns.size(), var_series.size(), "hits");
    std::vector<int> h(returns.size());
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = returns[i] < var_series[i] ? 1 : 0;
    return h;
}

TestResult lruc(const std::vector<int>& h, double q) {
    check_hits(h, "lruc");
    check_q0(q, "lruc");
    const double n = static_cast<double>(h.size());
    double x = std::accumulate(h.begin(), h.end(), 0.0);
    TestResult r;
    if (x == 0.0) {
        x = 0.5;
        r.corrected = true;
    } else if (x == n) {
        x = n - 0.5;
        r.corrected = true;
    }
    const double pi = x / n;
    r.stat = -2.0 * ((n - x) * std::log((1.0 - q) / (1.0 - pi)) + x * std::log(q / pi));
    r.stat = std::max(r.stat, 0.0);
    r.p_value = gsl_cdf_chisq_Q(r.stat, 1.0);
    return r;
}

TestResult lrind(const std::vector<int>& h) {
    check_hits(h, "lrind");
    double n00 = 0, n01 = 0, n10 = 0, n11 = 0;
    for (std::size_t t = 1; t < h.size(); ++t) {
        if (h[t - 1] == 0) (h[t] ? n01 : n00) += 1.0;
        else (h[t] ? n11 : n10) += 1.0;
    }
    const double p01 = n00 + n01 > 0 ? n01 / (n00 + n01) : 0.0;
    const double p11 = n10 + n11 > 0 ? n11 / (n10 + n11) : 0.0;
    const double p = (n01 + n11) / (n00 + n01 + n10 + n11);
    const double restricted = xlogy(n00 + n10, 1.0 - p) + xlogy(n01 + n11, p);
    const double unrestricted = xlogy(n00, 1.0 - p01) + xlogy(n01, p01) + xlogy(n10, 1.0 - p11) + xlogy(n11, p11);
    TestResult r;
    r.stat = std::max(-2.0 * (restricted - unrestricted), 0.0);
    r.p_value = gsl_cdf_chisq_Q(r.stat, 1.0);
    return r;
}

TestResult lrcc(const std::vector<int>& h, double q) {
    const TestResult uc = lruc(h, q);
    const TestResult ind = lrind(h);
    TestResult r;
    r.stat = uc.stat + ind.stat;
    r.p_value = gsl_cdf_chisq_Q(r.stat, 2.0);
    r.corrected = uc.corrected;
    return r;
}

TestResult dq_test(const std::vector<int>& h, double q, const std::vector<double>& var_series, int lags) {
    check_hits(h, "dq_test");
    check_q0(q, "dq_test");
    require_aligned(h.size(), var_series.size(), "dq_test");
    if (lags < 1) throw std::invalid_argument("dq_test: need at least one lag");
    const std::size_t n = h.size(), L = static_cast<std::size_t>(lags);
    const Eigen::Index rows = static_cast<Eigen::Index>(n - L);
    const Eigen::Index cols = lags + 2;
    if (rows <= cols) throw std::invalid_argument("dq_test: too few observations for the lag order");
    Eigen::MatrixXd X(rows, cols);
    Eigen::VectorXd y(rows);
    for (std::size_t t = L; t < n; ++t) {
        const Eigen::Index r = static_cast<Eigen::Index>(t - L);
        y(r) = h[t] - q;
        X(r, 0) = 1.0;
        for (std::size_t k = 1; k <= L; ++k) X(r, static_cast<Eigen::Index>(k)) = h[t - k] - q;
        X(r, cols - 1) = var_series[t];
    }
    // beta' X'X beta is the squared norm of the projection of y, which stays
    // defined when the design is rank deficient (e.g. a constant VaR).
    const Eigen::VectorXd beta = X.completeOrthogonalDecomposition().solve(y);
    const Eigen::VectorXd fit = X * beta;
    TestResult r;
    r.stat = fit.squaredNorm() / (q * (1.0 - q));
    r.p_value = gsl_cdf_chisq_Q(r.stat, static_cast<double>(cols));
    return r;
}

double mv_allocation(double expected_return, double var_forecast, double xi) {
    if (!(var_forecast > 0.0)) throw std::invalid_argument("mv_allocation: variance forecast must be positive");
    if (!(xi > 0.0)) throw std::invalid_argument("mv_allocation: risk aversion must be positive");
    const double x = expected_return / (xi * var_forecast);
    return std::clamp(x, 0.0, 1.0);
}

double sharpe(const std::vector<double>& r) {
    if (r.size() < 2) throw std::invalid_argument("sharpe: need at least 2 returns");
    const double sd = std::sqrt(sample_variance(r));
    if (!(sd > 0.0)) throw NumericalError("sharpe: returns have zero standard deviation");
    return sample_mean(r) / sd;
}

double expected_utility(const std::vector<double>& r, double xi) {
    if (r.size() < 2) throw std::invalid_argument("expected_utility: need at least 2 returns");
    if (!(xi > 0.0)) throw std::invalid_argument("expected_utility: risk aversion must be positive");
    return sample_mean(r) - 0.5 * xi * sample_variance(r);
}

UtilityResult utility_backtest(const std::vector<double>& returns, const std::vector<double>& vol, double xi) {
    require_aligned(returns.size(), vol.size(), "utility_backtest");
    if (returns.size() < 3) throw std::invalid_argument("utility_backtest: need at least 3 days");
    UtilityResult u;
    for (std::size_t i = 1; i < returns.size(); ++i) {
        const double w = mv_allocation(returns[i - 1], vol[i], xi);
        u.weights.push_back(w);
        u.portfolio_returns.push_back(w * returns[i]);
    }
    u.expected_utility = expected_utility(u.portfolio_returns, xi);
    // A strategy that never invests has no Sharpe ratio; report zero.
    try {
        u.sharpe = sharpe(u.portfolio_returns);
    } catch (const NumericalError&) {
        u.sharpe = 0.0;
    }
    return u;
}

std::vector<double> acf(const std::vector<double>& x, int max_lag) {
    if (max_lag < 0 || static_cast<std::size_t>(max_lag) >= x.size())
        throw std::invalid_argument("acf: lag out of range");
    const double m = sample_mean(x);
    double c0 = 0.0;
    for (double v : x) c0 += (v - m) * (v - m);
    if (!(c0 > 0.0)) throw NumericalError("acf: constant series");
    std::vector<double> r(max_lag + 1);
    for (int k = 0; k <= max_lag; ++k) {
        double s = 0.0;
        for (std::size_t t = k; t < x.size(); ++t) s += (x[t] - m) * (x[t - k] - m);
        r[k] = s / c0;
    }
    return r;
}

PersistenceResult persistence_regression(const std::vector<double>& realized, const std::vector<double>& vol,
                                         int max_lag) {
    require_aligned(realized.size(), vol.size(), "persistence_regression");
    const std::size_t n = realized.size();
    if (n < kPersistenceMinObs) throw std::invalid_argument("persistence_regression: need at least 60 days");
    const double mv = sample_mean(vol), mr = sample_mean(realized);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (vol[i] - mv) * (vol[i] - mv);
        sxy += (vol[i] - mv) * (realized[i] - mr);
        syy += (realized[i] - mr) * (realized[i] - mr);
    }
    if (!(sxx > 0.0) || sxx <= 1e-28 * n * mv * mv)
        throw NumericalError("persistence_regression: constant volatility series, singular design");
    PersistenceResult p;
    p.b = sxy / sxx;
    p.a = mr - p.b * mv;
    std::vector<double> e(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        e[i] = realized[i] - p.a - p.b * vol[i];
        ss += e[i] * e[i];
    }
    if (ss <= 1e-20 * (syy + mr * mr * n)) {
        p.exact_fit = true;
        p.acf.assign(max_lag + 1, 0.0);
        p.acf[0] = 1.0;
    } else {
        p.acf = acf(e, max_lag);
    }
    p.first_lag = max_lag >= 1 ? p.acf[1] : 0.0;
    for (int k = 1; k <= max_lag; ++k) p.max_abs = std::max(p.max_abs, std::abs(p.acf[k]));
    return p;
}

double kolmogorov_sf(double t) {
    if (t <= 0.0) return 1.0;
    if (t < 1.18) {
        // Small-t form converges faster: P(K <= t) = sqrt(2 pi)/t sum exp(-(2k-1)^2 pi^2 / (8 t^2)).
        const double pi = 3.14159265358979323846;
        double s = 0.0;
        for (int k = 1; k <= 20; ++k) {
            const double a = (2.0 * k - 1.0) * pi / t;
            s += std::exp(-a * a / 8.0);
        }
        return std::clamp(1.0 - std::sqrt(2.0 * pi) / t * s, 0.0, 1.0);
    }
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * t * t);
        s += (k % 2 ? 2.0 : -2.0) * term;
        if (term < 1e-18) break;
    }
    return std::clamp(s, 0.0, 1.0);
}

KsResult ks_test(std::vector<double> x, const std::function<double(double)>& cdf) {
    if (x.empty()) throw std::invalid_argument("ks_test: empty sample");
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    KsResult r;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(x[i]);
        r.d = std::max({r.d, (i + 1) / n - f, f - i / n});
    }
    const double rn = std::sqrt(n);
    r.p_value = kolmogorov_sf((rn + 0.12 + 0.11 / rn) * r.d);
    return r;
}

KsResult ks_test_normal(const std::vector<double>& sample) {
    return ks_test(sample, [](double v) { return gsl_cdf_ugaussian_P(v); });
}

}  // namespace ogi::eval
