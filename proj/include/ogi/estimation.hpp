#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ogi/core.hpp"
#include "ogi/filters.hpp"
#include "ogi/optimizer.hpp"
#include "ogi/theory.hpp"

namespace ogi::est {

struct EstimationConfig {
    ParamBox box;
    opt::OptimizerConfig optimizer;
    StationarityMatrix stationarity = StationarityMatrix::MeanRecursion;
    theory::AggregationConvention convention = theory::AggregationConvention::MainText;
    std::size_t min_days = 30;
    double phi_floor = 1e-16;
};

/// Box on one leg (omega, gamma, alpha, beta) from the parameter box.
opt::Bounds leg_bounds(const ParamBox& box);
opt::Bounds garch_bounds(const ParamBox& box);

/// Which leg of the OGI recursion a step-1 fit concerns.
enum class Leg { H, L };

/// Negative step-1 quasi-likelihood of one leg:
/// (1/n) sum log(c h_i) + y_i / (c h_i), with c = lambda (H) or 1 - lambda (L).
double leg_qlik(const filters::LegParams& p, const filters::FilterInput& in, Leg leg);
std::array<double, 4> leg_qlik_gradient(const filters::LegParams& p, const filters::FilterInput& in, Leg leg);

struct LegFit {
    filters::LegParams params;
    double qlik = 0.0;  // maximized quasi-likelihood (the negative of leg_qlik)
    opt::OptimResult optim;
};

struct Step1 {
    LegFit H, L;
};

Step1 step1_qmle(const filters::FilterInput& in, const EstimationConfig& cfg = {});

struct PhiHat {
    double H, L;
};

PhiHat residual_variances(const filters::FilterInput& in, const filters::LegParams& H, const filters::LegParams& L);

/// The WLSE criterion Q = (1/n) sum (RV_i - lambda hH_i)^2/phi_H + (ov_i - (1-lambda) hL_i)^2/phi_L.
/// The quasi-likelihood is -Q.
class WlseProblem {
public:
    WlseProblem(const filters::FilterInput& in, double phi_H, double phi_L);

    double criterion(const GarchTheta& g) const;
    Eigen::VectorXd gradient(const GarchTheta& g) const;
    /// Row i: derivative of the day-i term q_i of Q, where Q = mean(q_i).
    Eigen::MatrixXd day_scores(const GarchTheta& g) const;
    /// Central differences of the analytic gradient, step 1e-5 (1 + |theta_j|).
    Eigen::MatrixXd hessian(const GarchTheta& g) const;

    std::size_t n() const { return in_.rv.size(); }
    double phi_H() const { return phi_H_; }
    double phi_L() const { return phi_L_; }

private:
    void run(const GarchTheta& g, Eigen::MatrixXd* scores, Eigen::VectorXd* grad, double* value) const;

    filters::FilterInput in_;
    double h0H_, h0L_;
    double phi_H_, phi_L_;
};

struct WlseFit {
    GarchTheta theta;
    double quasi_likelihood = 0.0;  // -Q at theta
    opt::OptimResult optim;
};

/// Starts from the step-1 merge point (computed here unless supplied) and
/// any extra starting points.
WlseFit wlse(const filters::FilterInput& in, double phi_H, double phi_L, const EstimationConfig& cfg = {},
             const std::vector<GarchTheta>& extra_starts = {}, const Step1* step1 = nullptr);

/// Step-1 legs merged with a common gamma weighted by 1/phi.
GarchTheta merge_legs(const Step1& s1, double phi_H, double phi_L);

struct Sandwich {
    Eigen::MatrixXd cov;  // A^{-1} B A^{-1} / n
    Eigen::MatrixXd A, B;
    bool pseudo_inverse = false;
};

Sandwich sandwich_cov(const filters::FilterInput& in, const GarchTheta& theta, double phi_H, double phi_L);

struct ZStat {
    std::string name;
    double estimate = 0.0;
    double null_value = 0.0;
    double stat = 0.0;
    double p_value = 1.0;
};

/// T = (f(theta) - f0) / sqrt(grad' cov grad), where cov already carries 1/n.
ZStat z_statistic(double f_value, const Eigen::VectorXd& grad, const Eigen::MatrixXd& cov, double f0,
                  const std::string& name = "");

/// Gradients of the whole-day aggregates with respect to theta^g.
Eigen::VectorXd aggregate_gradient(const std::string& which, double lambda,
                                   theory::AggregationConvention convention, const GarchTheta& g);

struct FitReport {
    GarchTheta theta_g_hat;
    filters::LegParams thetaH_hat, thetaL_hat;
    double phi_H_hat = 0.0, phi_L_hat = 0.0;
    Eigen::MatrixXd cov;
    bool cov_pseudo_inverse = false;
    std::vector<ZStat> z_stats;
    double objective = 0.0;  // quasi-likelihood at theta_g_hat
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    std::vector<bool> constraint_active;
    double spectral_norm = 0.0;
    std::size_t n = 0;
};

/// Two-step fit with covariance and Z statistics against null (zero unless
/// given); z_stats covers the seven parameters and the aggregates omega^g,
/// alpha^g, beta^g.
FitReport fit_ogi(const filters::FilterInput& in, const EstimationConfig& cfg = {},
                  const GarchTheta* null_theta = nullptr);

// ---- competitors -------------------------------------------------------

struct GaussianFit {
    std::vector<double> params;
    double qlik = 0.0;  // maximized mean Gaussian quasi-likelihood
    opt::OptimResult optim;
};

/// (omega, gamma, beta) on open-to-open returns.
GaussianFit fit_garch11(const std::vector<double>& returns, const EstimationConfig& cfg = {});
/// (omega, gamma, beta, beta_neg).
GaussianFit fit_gjr11(const std::vector<double>& returns, const EstimationConfig& cfg = {});
/// (omega, gamma, alpha) with RV as proxy.
GaussianFit fit_realized_garch(const std::vector<double>& rv, const EstimationConfig& cfg = {});
/// (omega, gamma, alpha, beta) with RV + OV as proxy.
GaussianFit fit_a_ogi(const filters::FilterInput& in, filters::AOgiDivisors divisors = filters::AOgiDivisors::Printed,
                      const EstimationConfig& cfg = {});
/// (omega, gamma, alpha, beta, a, b, c_H, c_L) with RV + OV as proxy; thresholds
/// start from a grid of {-sd, 0, +sd} of the signed returns.
GaussianFit fit_gjr_ogi(const filters::FilterInput& in, const std::vector<double>& session_returns,
                        const std::vector<double>& overnight_returns, const EstimationConfig& cfg = {});

/// Mean Gaussian quasi-likelihood -(1/n) sum log h_i + y_i / h_i.
double gaussian_qlik(const std::vector<double>& h, const std::vector<double>& y);

}  // namespace ogi::est
