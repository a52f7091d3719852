#include "ogi/theory.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <functional>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace ogi::theory {

namespace {

constexpr double kSeriesSwitch = 1e-4;

// sum_k x^k / (k+offset)!. Six terms below kSeriesSwitch; up to |x| < 1 the
// closed forms of rho2 and rho3 cancel badly (rho3 loses ~7 digits at 1e-4),
// so the series runs until the terms stop mattering.
double taylor_tail(double x, int offset, int terms) {
    double fact = 1.0;
    for (int i = 2; i <= offset; ++i) fact *= i;
    double term = 1.0 / fact;
    double sum = 0.0;
    for (int k = 0; k < terms; ++k) {
        sum += term;
        term *= x / static_cast<double>(k + offset + 1);
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

}  // namespace

double rho1(double x) {
    if (std::abs(x) < kSeriesSwitch) return taylor_tail(x, 1, 6);
    return std::expm1(x) / x;
}

double rho2(double x) {
    if (std::abs(x) < kSeriesSwitch) return taylor_tail(x, 2, 6);
    if (std::abs(x) < 1.0) return taylor_tail(x, 2, 40);
    return (std::expm1(x) - x) / (x * x);
}

double rho3(double x) {
    if (std::abs(x) < kSeriesSwitch) return taylor_tail(x, 3, 6);
    if (std::abs(x) < 1.0) return taylor_tail(x, 3, 40);
    return (std::expm1(x) - x - 0.5 * x * x) / (x * x * x);
}

RhoCoefficients rho_coefficients(const FullTheta& t) {
    RhoCoefficients r{};
    r.rho_H1 = rho1(t.alpha_H);
    r.rho_H2 = rho2(t.alpha_H);
    r.rho_H3 = rho3(t.alpha_H);
    r.rho_H = 2.0 * t.gamma_H * r.rho_H3 + r.rho_H1 - r.rho_H2;
    r.rho_L1 = rho1(t.beta_L);
    r.rho_L2 = rho2(t.beta_L);
    r.rho_L3 = rho3(t.beta_L);
    r.rho_L = (t.gamma_L - 1.0) * r.rho_L2 + r.rho_L1;
    return r;
}

const char* to_string(AggregationConvention c) {
    return c == AggregationConvention::MainText ? "main-text" : "A1c";
}

AggregationConvention aggregation_from_string(const std::string& s) {
    if (s == "main-text" || s == "main") return AggregationConvention::MainText;
    if (s == "A1c" || s == "a1c") return AggregationConvention::SupplementA1c;
    throw std::invalid_argument("unknown aggregation convention '" + s + "'");
}

Aggregates aggregate_garch(const GarchTheta& g, double lambda, AggregationConvention convention) {
    const double alpha_L_weight = convention == AggregationConvention::MainText ? 1.0 : g.gamma;
    return Aggregates{lambda * g.omega_Hg + (1.0 - lambda) * g.omega_Lg,
                      lambda * g.alpha_Hg + (1.0 - lambda) * alpha_L_weight * g.alpha_Lg,
                      lambda * g.beta_Hg + (1.0 - lambda) * g.beta_Lg};
}

GarchTheta map_theta_to_garch(const FullTheta& t) {
    const RhoCoefficients r = rho_coefficients(t);
    const double gamma = t.gamma();
    const double cH = r.rho_H2 - 2.0 * r.rho_H3;
    const double cL = r.rho_L2 - 2.0 * r.rho_L3;

    GarchTheta g;
    g.gamma = gamma;
    g.omega_Hg = (1.0 - gamma) * (2.0 * t.omega_H1 * r.rho_H3 - t.omega_H2 * r.rho_H2 + t.nu_H * cH) +
                 t.gamma_L * (t.omega_H1 - t.omega_H2) * r.rho_H + t.omega_L * r.rho_H;
    g.alpha_Hg = r.rho_H * t.gamma_L * t.alpha_H;
    g.beta_Hg = r.rho_H * t.beta_L + t.beta_H * cH;

    // The overnight leg loads on the session leg's coefficients.
    const double feed = r.rho_L * t.alpha_H + t.alpha_L * cL;
    g.omega_Lg = (1.0 - gamma) * (t.omega_L * r.rho_L2 + t.nu_L * cL) +
                 (t.omega_H1 - t.omega_H2 + t.gamma_H * t.omega_L) * r.rho_L + feed * g.omega_Hg;
    g.alpha_Lg = feed * (gamma + g.alpha_Hg);
    g.beta_Lg = r.rho_L * t.gamma_H * t.beta_L + feed * g.beta_Hg;
    return g;
}

namespace {

// [(2x^2 - 8x + 9) e^{2x} + (16x - 48) e^x + 4x^2 + 22x + 39] / x^6.
// The numerator vanishes to sixth order at 0, so small x uses its power series.
double variance_kernel_over_x6(double x) {
    if (std::abs(x) < 0.05) {
        double sum = 0.0;
        double xp = 1.0;
        for (int k = 6; k <= 16; ++k) {
            double fk = 1.0;
            for (int i = 2; i <= k; ++i) fk *= i;
            double fk1 = fk / k;            // (k-1)!
            double fk2 = (k >= 2) ? fk1 / (k - 1) : 1.0;  // (k-2)!
            const double p2k = std::pow(2.0, k);
            // (2x^2 - 8x + 9) e^{2x}: 9*2^k/k! - 8*2^{k-1}/(k-1)! + 2*2^{k-2}/(k-2)!
            double c = 9.0 * p2k / fk - 8.0 * (p2k / 2.0) / fk1 + 2.0 * (p2k / 4.0) / fk2;
            // (16x - 48) e^x: -48/k! + 16/(k-1)!
            c += -48.0 / fk + 16.0 / fk1;
            sum += c * xp;
            xp *= x;
        }
        return sum;
    }
    const double e1 = std::exp(x);
    const double den = (2.0 * x * x - 8.0 * x + 9.0) * e1 * e1 + (16.0 * x - 48.0) * e1 + 4.0 * x * x + 22.0 * x + 39.0;
    return den / std::pow(x, 6);
}

}  // namespace

double nu_H_g(const FullTheta& t) {
    if (!(t.alpha_H > 0.0 && t.alpha_H < 1.0)) throw std::invalid_argument("nu_H_g: alpha_H must lie in (0,1)");
    const double k = variance_kernel_over_x6(t.alpha_H);
    if (!(k > 0.0)) throw NumericalError("nu_H_g: nonpositive variance kernel");
    return 0.5 * t.nu_H * t.nu_H * k;
}

double cond_var_H(const FullTheta& t, double lambda) { return lambda * lambda * nu_H_g(t); }

namespace {

struct GslIntegrator {
    std::unique_ptr<gsl_integration_workspace, decltype(&gsl_integration_workspace_free)> ws{
        gsl_integration_workspace_alloc(2000), &gsl_integration_workspace_free};

    double operator()(const std::function<double(double)>& f, double a, double b, double abs_tol, const char* what) {
        gsl_function gf;
        gf.function = [](double x, void* p) { return (*static_cast<const std::function<double(double)>*>(p))(x); };
        gf.params = const_cast<std::function<double(double)>*>(&f);
        double result = 0.0, err = 0.0;
        gsl_error_handler_t* old = gsl_set_error_handler_off();
        const int status = gsl_integration_qag(&gf, a, b, abs_tol, 0.0, 2000, GSL_INTEG_GAUSS21, ws.get(), &result, &err);
        gsl_set_error_handler(old);
        if (status != GSL_SUCCESS) {
            std::ostringstream os;
            os << "quadrature for " << what << " did not converge: " << gsl_strerror(status) << " (estimate "
               << result << ", error " << err << ")";
            throw NumericalError(os.str());
        }
        return result;
    }
};

}  // namespace

FCoefficients f_coefficients(const FullTheta& t, double lambda, double abs_tol) {
    const double b = t.beta_L;
    if (!(b > 0.0 && b < 1.0)) throw std::invalid_argument("f_coefficients: beta_L must lie in (0,1)");
    const double k = b / (1.0 - lambda);
    const double gm1 = t.gamma_L - 1.0;
    auto f1 = [=](double x) { return 1.5 * std::exp(6.0 * k * (1.0 - x)) - 0.5 * std::exp(2.0 * k * (1.0 - x)); };
    auto f2 = [=](double x) { return std::expm1(k * (x - lambda)) / k; };
    auto f3 = [=](double x) {
        const double u = k * (x - lambda);
        return (1.0 - lambda) / (b * b) * (std::expm1(u) - u);
    };
    auto ramp = [=](double x) { return (x - lambda) / (1.0 - lambda); };

    GslIntegrator integ;
    FCoefficients F{};
    F.F1 = 4.0 * integ([&](double x) { return (1.0 + ramp(x) * gm1) * f1(x) * (f2(x) + gm1 * f3(x)); }, lambda, 1.0,
                       abs_tol, "F1");
    F.F2 = 4.0 * integ(
                     [&](double x) {
                         return (1.0 + ramp(x) * gm1) * f1(x) * f3(x) + ramp(x) * f1(x) * (f2(x) + gm1 * f3(x));
                     },
                     lambda, 1.0, abs_tol, "F2");
    F.F3 = 4.0 * integ([&](double x) { return ramp(x) * f1(x) * f3(x); }, lambda, 1.0, abs_tol, "F3");
    return F;
}

double nu_L_g(const FullTheta& t, double lambda) {
    if (!(t.beta_L > 0.0 && t.beta_L < 1.0)) throw std::invalid_argument("nu_L_g: beta_L must lie in (0,1)");
    const RhoCoefficients r = rho_coefficients(t);
    const double own = 0.5 * t.nu_L * t.nu_L * variance_kernel_over_x6(t.beta_L);
    const double a = r.rho_L * t.beta_H * (1.0 - lambda) / lambda;
    const double b = t.beta_H / lambda;
    const double cross = t.nu_H > 0.0 ? (a * a + b * b) * nu_H_g(t) : 0.0;
    return own + cross;
}

double cond_var_L(const FullTheta& t, double s2, double lambda) {
    const FCoefficients F = f_coefficients(t, lambda);
    const double nuL = nu_L_g(t, lambda);
    return F.F1 * s2 * s2 + F.F2 * t.omega_L * s2 + F.F3 * t.omega_L * t.omega_L +
           (1.0 - lambda) * (1.0 - lambda) * nuL;
}

double close_state(const FullTheta& t, double sigma2_prev_close, double hH_next, double ov, double lambda) {
    return t.omega_H1 - t.omega_H2 + t.gamma_H * t.omega_L + t.gamma() * sigma2_prev_close + t.alpha_H * hH_next +
           t.gamma_H * t.beta_L / (1.0 - lambda) * ov;
}

double forecast_one(const GarchTheta& g, double h_n, double rv_n, double ov_n, double lambda,
                    AggregationConvention convention) {
    const Aggregates a = aggregate_garch(g, lambda, convention);
    return a.omega_g + g.gamma * h_n + a.alpha_g / lambda * rv_n + a.beta_g / (1.0 - lambda) * ov_n;
}

MultiForecast forecast_multi(const GarchTheta& g, double hH_n, double hL_n, double h_n, int k, double lambda,
                             const Innovations* observed, AggregationConvention convention) {
    if (k < 1) throw std::invalid_argument("forecast_multi: horizon must be >= 1");
    const Aggregates a = aggregate_garch(g, lambda, convention);
    MultiForecast out;
    out.divergent = spectral_norm_2x2(mean_recursion_matrix(g)) >= 1.0;
    out.h.reserve(k);
    out.hH.reserve(k);
    out.hL.reserve(k);

    double hH = hH_n, hL = hL_n, h = h_n;
    for (int step = 0; step < k; ++step) {
        double rv_term, ov_term;  // RV/lambda and ov/(1-lambda), or their conditional means
        if (step == 0 && observed) {
            rv_term = observed->rv / lambda;
            ov_term = observed->ov / (1.0 - lambda);
        } else {
            rv_term = hH;
            ov_term = hL;
        }
        const double hH_new = g.omega_Hg + g.gamma * hH + g.alpha_Hg * rv_term + g.beta_Hg * ov_term;
        const double hL_new = g.omega_Lg + g.gamma * hL + g.alpha_Lg * rv_term + g.beta_Lg * ov_term;
        const double h_new = (step == 0 && observed)
                                 ? forecast_one(g, h, observed->rv, observed->ov, lambda, convention)
                                 : a.omega_g + g.gamma * h + a.alpha_g * rv_term + a.beta_g * ov_term;
        hH = hH_new;
        hL = hL_new;
        h = h_new;
        out.hH.push_back(hH);
        out.hL.push_back(hL);
        out.h.push_back(h);
    }
    return out;
}

FixedPoint stationary_levels(const GarchTheta& g, double lambda, AggregationConvention convention) {
    const Matrix2 m = mean_recursion_matrix(g);
    const double a = 1.0 - m[0][0], b = -m[0][1], c = -m[1][0], d = 1.0 - m[1][1];
    const double det = a * d - b * c;
    if (std::abs(det) < 1e-300) throw NumericalError("stationary_levels: I - M is singular");
    if (!(g.gamma < 1.0)) throw NumericalError("stationary_levels: gamma >= 1");
    FixedPoint fp{};
    fp.hH = (d * g.omega_Hg - b * g.omega_Lg) / det;
    fp.hL = (-c * g.omega_Hg + a * g.omega_Lg) / det;
    const Aggregates agg = aggregate_garch(g, lambda, convention);
    fp.h = (agg.omega_g + agg.alpha_g * fp.hH + agg.beta_g * fp.hL) / (1.0 - g.gamma);
    return fp;
}

}  // namespace ogi::theory
