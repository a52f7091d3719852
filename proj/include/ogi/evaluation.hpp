#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace ogi::eval {

/// Mean of (vol_i - realized_i)^2.
double mspe(const std::vector<double>& vol, const std::vector<double>& realized);
/// Mean of log v_i + r_i / v_i.
double qlike(const std::vector<double>& vol, const std::vector<double>& realized);

std::vector<double> squared_errors(const std::vector<double>& vol, const std::vector<double>& realized);
std::vector<double> qlike_terms(const std::vector<double>& vol, const std::vector<double>& realized);

struct TestResult {
    double stat = 0.0;
    double p_value = 1.0;
    bool corrected = false;  // continuity correction applied (LR tests only)
};

inline constexpr std::size_t kDmMinObs = 10;

/// Diebold-Mariano test on loss_a - loss_b with a Bartlett HAC variance.
/// Default lag floor(n^(1/3)). Positive statistic: model a has larger loss.
TestResult dm_test(const std::vector<double>& loss_a, const std::vector<double>& loss_b,
                   std::optional<int> hac_lag = std::nullopt);

/// Bartlett-weighted long-run variance of x (divisor n in each autocovariance).
double bartlett_lrv(const std::vector<double>& x, int lag);

/// Sample quantile with linear interpolation between order statistics
/// (position (n-1) q on the sorted sample).
double quantile(std::vector<double> x, double q);

inline constexpr std::size_t kVarMinInSample = 100;

/// Quantile of in-sample returns standardized by sqrt(fitted vol), scaled by sqrt(forecast).
double var_forecast(const std::vector<double>& returns, const std::vector<double>& fitted_vol, double forecast_vol,
                    double q0, std::size_t min_in_sample = kVarMinInSample);

inline constexpr std::size_t kBacktestMinObs = 50;

/// Kupiec unconditional coverage. x = 0 or x = n uses x = 0.5 or n - 0.5.
TestResult lruc(const std::vector<int>& hits, double q0);
/// First-order Markov independence part of Christoffersen's test.
TestResult lrind(const std::vector<int>& hits);
/// LRuc + LRind, chi-square with 2 degrees of freedom.
TestResult lrcc(const std::vector<int>& hits, double q0);
/// Engle-Manganelli DQ: centred hits on a constant, `lags` lagged centred
/// hits and the contemporaneous VaR; chi-square with lags + 2 degrees of freedom.
TestResult dq_test(const std::vector<int>& hits, double q0, const std::vector<double>& var_series, int lags = 4);

/// Hit sequence 1{return_i < VaR_i}.
std::vector<int> hits(const std::vector<double>& returns, const std::vector<double>& var_series);

/// (1/xi) E/Var clipped to [0, 1].
double mv_allocation(double expected_return, double var_forecast, double xi);
/// mean / sd (sample sd).
double sharpe(const std::vector<double>& returns);
/// mean - xi/2 * sd^2.
double expected_utility(const std::vector<double>& returns, double xi);

struct UtilityResult {
    std::vector<double> weights;
    std::vector<double> portfolio_returns;  // weights_i * returns_i
    double sharpe = 0.0;
    double expected_utility = 0.0;
};

/// Day i invests with weight from returns[i-1] and vol_forecasts[i]; the first day has no
/// previous return and is dropped.
UtilityResult utility_backtest(const std::vector<double>& returns, const std::vector<double>& vol_forecasts,
                               double xi);

inline constexpr std::size_t kPersistenceMinObs = 60;
inline constexpr int kAcfLags = 30;

struct PersistenceResult {
    double a = 0.0, b = 0.0;
    std::vector<double> acf;  // lags 0..kAcfLags, acf[0] = 1
    double first_lag = 0.0;
    double max_abs = 0.0;     // over lags 1..kAcfLags
    bool exact_fit = false;   // residuals vanish to rounding; acf is zero beyond lag 0
};

PersistenceResult persistence_regression(const std::vector<double>& realized, const std::vector<double>& vol,
                                         int max_lag = kAcfLags);

/// Sample autocorrelations at lags 0..max_lag.
std::vector<double> acf(const std::vector<double>& x, int max_lag);

struct KsResult {
    double d = 0.0;
    double p_value = 1.0;
};

/// One-sample Kolmogorov-Smirnov test; the p-value uses the asymptotic
/// Kolmogorov distribution at (sqrt(n) + 0.12 + 0.11/sqrt(n)) D.
KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf);
KsResult ks_test_normal(const std::vector<double>& sample);

/// P(K > t) for the Kolmogorov distribution.
double kolmogorov_sf(double t);

}  // namespace ogi::eval
