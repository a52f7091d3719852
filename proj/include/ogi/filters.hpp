#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ogi/core.hpp"
#include "ogi/theory.hpp"

namespace ogi::filters {

/// Inputs shared by the volatility recursions. Index i holds day i+1.
struct FilterInput {
    std::vector<double> rv;
    std::vector<double> ov;
    double lambda = kDefaultLambda;
    std::optional<double> h0H;  // default RV_1
    std::optional<double> h0L;  // default sample variance of close-to-open returns

    void check() const;
    /// Default starting values when none were supplied.
    double initial_hH() const;
    double initial_hL() const;
};

/// A single conditional-volatility path plus its one-step-ahead value.
struct Series {
    std::vector<double> h;
    double h_next = 0.0;
};

/// One leg of the OGI recursion: h_n = omega + gamma h_{n-1} + alpha RV/lambda + beta ov/(1-lambda).
struct LegParams {
    double omega = 0.0, gamma = 0.0, alpha = 0.0, beta = 0.0;
};

Series filter_leg(const LegParams& p, const std::vector<double>& rv, const std::vector<double>& ov, double lambda,
                  double h0);

VolSeries filter_ogi(const GarchTheta& theta, const FilterInput& in,
                     theory::AggregationConvention convention = theory::AggregationConvention::MainText);

/// Separate legs with their own gamma.
VolSeries filter_s_ogi(const LegParams& H, const LegParams& L, const FilterInput& in);

/// Whole-day recursion. Printed: alpha RV/(1-lambda) + beta ov/lambda;
/// Theorem: alpha RV/lambda + beta ov/(1-lambda).
enum class AOgiDivisors { Printed, Theorem };

struct AOgiParams {
    double omega = 0.0, gamma = 0.0, alpha = 0.0, beta = 0.0;
};

Series filter_a_ogi(const AOgiParams& p, const FilterInput& in, AOgiDivisors divisors = AOgiDivisors::Printed,
                    std::optional<double> h0 = std::nullopt);

/// Whole-day OGI recursion with threshold leverage terms on both innovations.
struct GjrOgiParams {
    double omega = 0.0, gamma = 0.0, alpha = 0.0, beta = 0.0;
    double a = 0.0, b = 0.0;
    double c_H = 0.0, c_L = 0.0;

    /// Aggregates of theta with no leverage.
    static GjrOgiParams from_garch(const GarchTheta& g, double lambda,
                                   theory::AggregationConvention convention = theory::AggregationConvention::MainText);
};

Series filter_gjr_ogi(const GjrOgiParams& p, const FilterInput& in, const std::vector<double>& session_returns,
                      const std::vector<double>& overnight_returns, std::optional<double> h0 = std::nullopt);

/// h_n = omega + gamma h_{n-1} + beta r_{n-1}^2 (+ beta_neg 1{r<0} r^2 for GJR).
struct GarchParams {
    double omega = 0.0, gamma = 0.0, beta = 0.0, beta_neg = 0.0;
};

Series filter_garch11(const GarchParams& p, const std::vector<double>& returns, std::optional<double> h0 = std::nullopt);
Series filter_gjr11(const GarchParams& p, const std::vector<double>& returns, std::optional<double> h0 = std::nullopt);

/// h_n = omega + gamma h_{n-1} + alpha RV_{n-1}.
struct RealizedGarchParams {
    double omega = 0.0, gamma = 0.0, alpha = 0.0;
};

Series filter_realized_garch(const RealizedGarchParams& p, const std::vector<double>& rv,
                             std::optional<double> h0 = std::nullopt);

/// 1 + mean(OV/RV) over days with RV > 0. Days with RV == 0 are skipped
/// and counted in *skipped when given.
double overnight_adjustment(const std::vector<double>& rv, const std::vector<double>& ov, int* skipped = nullptr);

/// RV_n = b0 + b1 RV_{n-1} + b5 mean(RV_{n-5..n-1}) + b22 mean(RV_{n-22..n-1}),
/// on log RV when log_scale is set.
struct HarFit {
    double b0 = 0.0, b1 = 0.0, b5 = 0.0, b22 = 0.0;
    double resid_var = 0.0;
    bool log_scale = false;
};

inline constexpr std::size_t kHarMinObs = 23;

HarFit fit_har(const std::vector<double>& rv, bool log_scale = false);

/// Forecast of the value following the last entry of history; log fits are
/// mapped back with exp(sigma^2/2). Floored at kForecastFloor.
double har_forecast(const HarFit& fit, const std::vector<double>& history, bool* floored = nullptr);

/// In-sample one-step fits for days 23..n (earlier days carry the first fitted value).
std::vector<double> har_fitted(const HarFit& fit, const std::vector<double>& rv);

inline constexpr double kForecastFloor = 1e-12;

}  // namespace ogi::filters
