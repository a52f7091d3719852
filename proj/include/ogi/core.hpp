#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ogi {

/// Raised when a numerical procedure cannot produce a meaningful value
/// (non-finite state, singular design, undefined statistic).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultLambda = 6.5 / 24.0;

/// Structural parameters of the continuous-time process.
struct FullTheta {
    double omega_H1 = 0.0;
    double omega_H2 = 0.0;
    double omega_L = 0.0;
    double gamma_H = 0.0;
    double gamma_L = 0.0;
    double alpha_H = 0.0;
    double alpha_L = 0.0;
    double beta_H = 0.0;
    double beta_L = 0.0;
    double nu_H = 0.0;
    double nu_L = 0.0;

    /// Simulation design used for the Monte-Carlo studies.
    static FullTheta reference();

    double gamma() const { return gamma_H * gamma_L; }
};

/// Reduced GARCH parameters driving every filter and estimator.
struct GarchTheta {
    double omega_Hg = 0.0;
    double omega_Lg = 0.0;
    double gamma = 0.0;
    double alpha_Hg = 0.0;
    double alpha_Lg = 0.0;
    double beta_Hg = 0.0;
    double beta_Lg = 0.0;

    static constexpr std::size_t kSize = 7;
    static const std::array<const char*, kSize>& names();

    std::array<double, kSize> to_array() const;
    static GarchTheta from_array(const std::array<double, kSize>& v);
};

struct SessionSpec {
    double lambda = kDefaultLambda;
};

/// Box of admissible GARCH parameters. All intervals are open.
struct ParamBox {
    double omega_lo = 1e-8, omega_hi = 10.0;
    double gamma_lo = 0.01, gamma_hi = 0.999;
    double alpha_lo = 1e-6, alpha_hi = 0.999;
    double beta_lo = 1e-6, beta_hi = 0.999;
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

/// Domain required by the integrated-volatility decomposition.
ValidationReport validate_full_theta(const FullTheta& theta);

/// Weaker domain accepted by the simulator: finite, nonnegative loadings,
/// gamma_H * gamma_L < 1. Degenerate (all-zero) feedback is allowed.
ValidationReport validate_for_simulation(const FullTheta& theta);

enum class StationarityMatrix {
    MeanRecursion,  ///< [[g+aH, bH],[aL, g+bL]]
    Printed,        ///< same with 1/lambda and 1/(1-lambda) on the loadings
};

ValidationReport validate_garch_theta(const GarchTheta& theta, double lambda,
                                      const ParamBox& box = {},
                                      StationarityMatrix which = StationarityMatrix::MeanRecursion);

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Largest singular value of a 2x2 real matrix.
double spectral_norm_2x2(const Matrix2& m);

Matrix2 mean_recursion_matrix(const GarchTheta& theta);
Matrix2 printed_stationarity_matrix(const GarchTheta& theta, double lambda);

/// One open-to-close session of high-frequency observations.
struct MarketDay {
    int day_index = 1;
    std::vector<double> tick_times;
    std::vector<double> tick_logprices;
    double open_logprice = 0.0;
    double close_logprice = 0.0;

    /// Number of increments in the session (ticks minus one).
    std::size_t increments() const { return tick_logprices.empty() ? 0 : tick_logprices.size() - 1; }
};

/// Throws std::invalid_argument naming the first broken invariant.
void check_market_day(const MarketDay& day, double lambda);

struct DaySeries {
    std::vector<MarketDay> days;

    void check(double lambda) const;

    /// (open_{d+1} - close_d)^2; the last day has no following open and is
    /// excluded, so the result has days.size() - 1 entries.
    std::vector<double> overnight_return_sq() const;
    std::vector<double> intraday_return_sq() const;
    /// open_{d+1} - close_d, same length as overnight_return_sq().
    std::vector<double> overnight_returns() const;
    std::vector<double> intraday_returns() const;
    /// open_{d+1} - open_d, same length as overnight_return_sq().
    std::vector<double> open_to_open_returns() const;
};

struct VolSeries {
    std::vector<double> rv;
    std::vector<double> ov;
    std::vector<double> hH;
    std::vector<double> hL;
    std::vector<double> h;
    // One-step-ahead values after the last observed day.
    double hH_next = 0.0;
    double hL_next = 0.0;
    double h_next = 0.0;

    std::size_t size() const { return rv.size(); }
};

// Day d (1-based) spans [d-1, d]; the session is [d-1, d-1+lambda].
inline double session_open_time(int day) { return static_cast<double>(day - 1); }
inline double session_close_time(int day, double lambda) { return static_cast<double>(day - 1) + lambda; }

double sample_mean(const std::vector<double>& x);
/// Unbiased (n-1) sample variance.
double sample_variance(const std::vector<double>& x);

}  // namespace ogi
