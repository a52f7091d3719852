#pragma once

#include <string>
#include <vector>

#include "ogi/core.hpp"

namespace ogi::theory {

/// Exponential-integral coefficients of the two legs. The H leg uses
/// alpha_H, the L leg uses beta_L.
struct RhoCoefficients {
    double rho_H1, rho_H2, rho_H3, rho_H;
    double rho_L1, rho_L2, rho_L3, rho_L;
};

/// (e^x - 1)/x, (e^x - 1 - x)/x^2 and (e^x - 1 - x - x^2/2)/x^3, switching to a
/// six-term Taylor series for |x| < 1e-4 (rho2, rho3: a longer series up to |x| < 1).
double rho1(double x);
double rho2(double x);
double rho3(double x);

RhoCoefficients rho_coefficients(const FullTheta& theta);

/// How the whole-day alpha loading is assembled from the two legs.
///  - MainText:   alpha^g = lambda alpha_H^g + (1-lambda) alpha_L^g
///  - SupplementA1c: alpha^g = lambda alpha_H^g + (1-lambda) gamma alpha_L^g
/// Only MainText satisfies h = lambda h^H + (1-lambda) h^L.
enum class AggregationConvention { MainText, SupplementA1c };

const char* to_string(AggregationConvention c);
AggregationConvention aggregation_from_string(const std::string& s);

struct Aggregates {
    double omega_g;
    double alpha_g;
    double beta_g;
};

Aggregates aggregate_garch(const GarchTheta& g, double lambda,
                           AggregationConvention convention = AggregationConvention::MainText);

/// theta -> theta^g. alpha_H or beta_L equal to zero are handled by the
/// series branch of the rho's.
GarchTheta map_theta_to_garch(const FullTheta& theta);

/// nu_H^g = E[(D^H)^2 | F] / lambda^2.
double nu_H_g(const FullTheta& theta);

/// Conditional variance of the session martingale difference, lambda^2 nu_H^g.
double cond_var_H(const FullTheta& theta, double lambda);

struct FCoefficients {
    double F1, F2, F3;
};

/// F_{beta_L,i} by adaptive Gauss-Kronrod quadrature on [lambda, 1].
FCoefficients f_coefficients(const FullTheta& theta, double lambda, double abs_tol = 1e-10);

/// nu_L^g, as printed (its cross term loads nu_H^g through beta_H).
double nu_L_g(const FullTheta& theta, double lambda);

/// Conditional variance of the overnight proxy's martingale difference
/// given the close-time state s2.
double cond_var_L(const FullTheta& theta, double s2, double lambda);

/// E[sigma^2 at the coming close | F]: omega_H1 - omega_H2 + gamma_H omega_L
/// + gamma sigma2_prev_close + alpha_H hH_next + gamma_H beta_L/(1-lambda) ov.
double close_state(const FullTheta& theta, double sigma2_prev_close, double hH_next, double ov, double lambda);

/// h_{n+1} = omega^g + gamma h_n + (alpha^g/lambda) RV_n + (beta^g/(1-lambda)) ov_n.
double forecast_one(const GarchTheta& g, double h_n, double rv_n, double ov_n, double lambda,
                    AggregationConvention convention = AggregationConvention::MainText);

struct MultiForecast {
    std::vector<double> h;   // h_{n+1..n+k}
    std::vector<double> hH;  // hH_{n+1..n+k}
    std::vector<double> hL;
    bool divergent = false;  // ||M||_2 >= 1
};

struct Innovations {
    double rv;
    double ov;
};

/// Multi-step forecasts. Step one uses the observed innovations when given,
/// otherwise their conditional means lambda hH_n and (1-lambda) hL_n; later
/// steps iterate the mean recursion.
MultiForecast forecast_multi(const GarchTheta& g, double hH_n, double hL_n, double h_n, int k, double lambda,
                             const Innovations* observed = nullptr,
                             AggregationConvention convention = AggregationConvention::MainText);

struct FixedPoint {
    double hH, hL, h;
};

/// Unconditional means implied by (I - M)^{-1} (omega_H^g, omega_L^g); h solves
/// the whole-day equation at those leg levels.
FixedPoint stationary_levels(const GarchTheta& g, double lambda,
                             AggregationConvention convention = AggregationConvention::MainText);

}  // namespace ogi::theory
