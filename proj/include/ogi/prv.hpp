#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ogi/core.hpp"

namespace ogi::prv {

using Weight = std::function<double(double)>;

/// g(x) = min(x, 1 - x).
double triangle(double x);

/// Integral of g^2 over [0,1]: 1/12 for the triangle, 1024-panel Simpson otherwise.
double psi(const Weight& g);

struct PrvConfig {
    std::optional<int> K;            // default floor(sqrt(m))
    Weight g;                        // default triangle
    double ctau_multiplier = 3.0;
    // c_tau = multiplier * sd(m^e * Ybar). e = 1/4 keeps the threshold a fixed
    // multiple of sd(Ybar) up to the slowly growing m^{1/4 - 0.235}.
    double ctau_scale_exponent = 0.25;
    double trunc_exponent = 0.235;   // tau_m = c_tau m^{-trunc_exponent}
    double floor = 1e-12;
    std::optional<double> ctau;      // fixed constant; otherwise estimated from the data
    bool per_day_ctau = false;       // estimate c_tau from each day alone instead of pooling
    bool truncate = true;

    int bandwidth(std::size_t m) const;
};

/// Ybar_k = sum_{l=1}^{K-1} g(l/K) (Y_{k+l} - Y_{k+l-1}), k = 1..m-K+1, for
/// ticks Y_0..Y_m.
std::vector<double> preaverage(const std::vector<double>& ticks, int K, const Weight& g = triangle);

/// Noise-correction terms Yhat^2_k = sum_{l=1}^{K} (g(l/K) - g((l-1)/K))^2 (Y_{k+l-1} - Y_{k+l-2})^2.
std::vector<double> noise_correction(const std::vector<double>& ticks, int K, const Weight& g = triangle);

/// multiplier * sample sd of m^exponent * values.
double ctau_from_data(const std::vector<double>& values, double multiplier, std::size_t m, double exponent);

struct PrvResult {
    int day_index = 0;
    double rv = 0.0;
    int truncated = 0;  // windows removed by the threshold
    int windows = 0;
    int m = 0;          // increments in the day
    bool floored = false;
};

/// One day's estimate with a known c_tau (ignored when truncation is off).
PrvResult prv(const MarketDay& day, const PrvConfig& cfg, double ctau);

/// c_tau pooled across all days (or per day) as configured.
double pooled_ctau(const DaySeries& days, const PrvConfig& cfg);

/// Estimates for every day in order of day_index.
std::vector<PrvResult> prv_series(const DaySeries& days, const PrvConfig& cfg);

std::vector<double> values(const std::vector<PrvResult>& r);

}  // namespace ogi::prv
