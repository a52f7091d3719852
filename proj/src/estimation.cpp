#include "ogi/estimation.hpp"

#include <gsl/gsl_cdf.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ogi::est {

namespace {

constexpr double kInfeasible = 1e6;

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

void require_days(const filters::FilterInput& in, const EstimationConfig& cfg, const char* who) {
    in.check();
    if (in.rv.size() < cfg.min_days)
        throw std::invalid_argument(std::string(who) + ": need at least " + std::to_string(cfg.min_days) +
                                    " days, got " + std::to_string(in.rv.size()));
}

filters::LegParams leg_from(const std::vector<double>& x) { return {x[0], x[1], x[2], x[3]}; }

GarchTheta theta_from(const std::vector<double>& x) {
    std::array<double, GarchTheta::kSize> a{};
    std::copy(x.begin(), x.end(), a.begin());
    return GarchTheta::from_array(a);
}

std::vector<double> to_vec(const GarchTheta& g) {
    const auto a = g.to_array();
    return {a.begin(), a.end()};
}

}  // namespace

opt::Bounds leg_bounds(const ParamBox& b) {
    return {{b.omega_lo, b.gamma_lo, b.alpha_lo, b.beta_lo}, {b.omega_hi, b.gamma_hi, b.alpha_hi, b.beta_hi}};
}

opt::Bounds garch_bounds(const ParamBox& b) {
    return {{b.omega_lo, b.omega_lo, b.gamma_lo, b.alpha_lo, b.alpha_lo, b.beta_lo, b.beta_lo},
            {b.omega_hi, b.omega_hi, b.gamma_hi, b.alpha_hi, b.alpha_hi, b.beta_hi, b.beta_hi}};
}

// ---- step 1 --------------------------------------------------------------

namespace {

struct LegEval {
    double value;
    std::array<double, 4> grad;
};

LegEval leg_eval(const filters::LegParams& p, const filters::FilterInput& in, Leg leg, bool want_grad) {
    const double lambda = in.lambda;
    const double c = leg == Leg::H ? lambda : 1.0 - lambda;
    const std::vector<double>& y = leg == Leg::H ? in.rv : in.ov;
    const double a_div = lambda, b_div = 1.0 - lambda;
    double h = leg == Leg::H ? in.initial_hH() : in.initial_hL();
    std::array<double, 4> d{0, 0, 0, 0};
    LegEval r{0.0, {0, 0, 0, 0}};
    const std::size_t n = y.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!(h > 0.0) || !std::isfinite(h)) return {std::numeric_limits<double>::infinity(), {0, 0, 0, 0}};
        const double ch = c * h;
        r.value += std::log(ch) + y[i] / ch;
        if (want_grad) {
            const double w = 1.0 / h - y[i] / (c * h * h);
            for (int k = 0; k < 4; ++k) r.grad[k] += w * d[k];
            const std::array<double, 4> direct{1.0, h, in.rv[i] / a_div, in.ov[i] / b_div};
            for (int k = 0; k < 4; ++k) d[k] = direct[k] + p.gamma * d[k];
        }
        h = p.omega + p.gamma * h + p.alpha / a_div * in.rv[i] + p.beta / b_div * in.ov[i];
    }
    r.value /= static_cast<double>(n);
    for (double& g : r.grad) g /= static_cast<double>(n);
    return r;
}

filters::LegParams leg_start(const filters::FilterInput& in, Leg leg, const ParamBox& box) {
    const double muH = mean(in.rv) / in.lambda;
    const double muL = mean(in.ov) / (1.0 - in.lambda);
    filters::LegParams p{0.0, 0.4, 0.2, 0.1};
    if (leg == Leg::H)
        p.omega = std::max(muH * (1.0 - p.gamma - p.alpha) - p.beta * muL, 0.05 * muH);
    else
        p.omega = std::max(muL * (1.0 - p.gamma - p.beta) - p.alpha * muH, 0.05 * muL);
    p.omega = std::clamp(p.omega, box.omega_lo * 10.0, box.omega_hi * 0.5);
    return p;
}

LegFit fit_leg(const filters::FilterInput& in, Leg leg, const EstimationConfig& cfg) {
    const opt::Objective f = [&](const std::vector<double>& x) { return leg_eval(leg_from(x), in, leg, false).value; };
    const opt::Gradient gr = [&](const std::vector<double>& x, std::vector<double>& g) {
        const auto e = leg_eval(leg_from(x), in, leg, true);
        g.assign(e.grad.begin(), e.grad.end());
    };
    const filters::LegParams s = leg_start(in, leg, cfg.box);
    LegFit fit;
    fit.optim = opt::minimize(f, gr, {s.omega, s.gamma, s.alpha, s.beta}, leg_bounds(cfg.box), cfg.optimizer);
    fit.params = leg_from(fit.optim.x);
    fit.qlik = -fit.optim.value;
    return fit;
}

}  // namespace

double leg_qlik(const filters::LegParams& p, const filters::FilterInput& in, Leg leg) {
    return leg_eval(p, in, leg, false).value;
}

std::array<double, 4> leg_qlik_gradient(const filters::LegParams& p, const filters::FilterInput& in, Leg leg) {
    return leg_eval(p, in, leg, true).grad;
}

Step1 step1_qmle(const filters::FilterInput& in, const EstimationConfig& cfg) {
    require_days(in, cfg, "step1_qmle");
    return Step1{fit_leg(in, Leg::H, cfg), fit_leg(in, Leg::L, cfg)};
}

PhiHat residual_variances(const filters::FilterInput& in, const filters::LegParams& H, const filters::LegParams& L) {
    in.check();
    const double lambda = in.lambda;
    const auto hH = filters::filter_leg(H, in.rv, in.ov, lambda, in.initial_hH()).h;
    const auto hL = filters::filter_leg(L, in.rv, in.ov, lambda, in.initial_hL()).h;
    double sH = 0.0, sL = 0.0;
    for (std::size_t i = 0; i < hH.size(); ++i) {
        const double eH = in.rv[i] - lambda * hH[i];
        const double eL = in.ov[i] - (1.0 - lambda) * hL[i];
        sH += eH * eH;
        sL += eL * eL;
    }
    const double n = static_cast<double>(hH.size());
    return {sH / n, sL / n};
}

// ---- step 2 --------------------------------------------------------------

WlseProblem::WlseProblem(const filters::FilterInput& in, double phi_H, double phi_L)
    : in_(in), h0H_(in.initial_hH()), h0L_(in.initial_hL()), phi_H_(phi_H), phi_L_(phi_L) {
    in_.check();
    if (!(phi_H > 0.0) || !(phi_L > 0.0)) throw std::invalid_argument("WLSE: residual variances must be positive");
}

void WlseProblem::run(const GarchTheta& g, Eigen::MatrixXd* scores, Eigen::VectorXd* grad, double* value) const {
    const double lambda = in_.lambda;
    const double cL = 1.0 - lambda;
    const std::size_t n = in_.rv.size();
    double hH = h0H_, hL = h0L_;
    std::array<double, 4> dH{0, 0, 0, 0}, dL{0, 0, 0, 0};  // (omega, gamma, alpha, beta) of each leg
    const bool want = scores || grad;
    if (scores) scores->setZero(static_cast<Eigen::Index>(n), 7);
    if (grad) grad->setZero(7);
    double q = 0.0;
    static constexpr std::array<int, 4> idxH{0, 2, 3, 5};
    static constexpr std::array<int, 4> idxL{1, 2, 4, 6};
    for (std::size_t i = 0; i < n; ++i) {
        const double eH = in_.rv[i] - lambda * hH;
        const double eL = in_.ov[i] - cL * hL;
        q += eH * eH / phi_H_ + eL * eL / phi_L_;
        if (want) {
            const double wH = -2.0 * lambda * eH / phi_H_;
            const double wL = -2.0 * cL * eL / phi_L_;
            double row[7] = {0, 0, 0, 0, 0, 0, 0};
            for (int k = 0; k < 4; ++k) {
                row[idxH[k]] += wH * dH[k];
                row[idxL[k]] += wL * dL[k];
            }
            for (int k = 0; k < 7; ++k) {
                if (scores) (*scores)(static_cast<Eigen::Index>(i), k) = row[k];
                if (grad) (*grad)(k) += row[k];
            }
            const double a = in_.rv[i] / lambda, b = in_.ov[i] / cL;
            const std::array<double, 4> directH{1.0, hH, a, b};
            const std::array<double, 4> directL{1.0, hL, a, b};
            for (int k = 0; k < 4; ++k) {
                dH[k] = directH[k] + g.gamma * dH[k];
                dL[k] = directL[k] + g.gamma * dL[k];
            }
        }
        hH = g.omega_Hg + g.gamma * hH + g.alpha_Hg / lambda * in_.rv[i] + g.beta_Hg / cL * in_.ov[i];
        hL = g.omega_Lg + g.gamma * hL + g.alpha_Lg / lambda * in_.rv[i] + g.beta_Lg / cL * in_.ov[i];
    }
    const double dn = static_cast<double>(n);
    if (value) *value = q / dn;
    if (grad) *grad /= dn;
}

double WlseProblem::criterion(const GarchTheta& g) const {
    double v = 0.0;
    run(g, nullptr, nullptr, &v);
    return v;
}

Eigen::VectorXd WlseProblem::gradient(const GarchTheta& g) const {
    Eigen::VectorXd gr;
    run(g, nullptr, &gr, nullptr);
    return gr;
}

Eigen::MatrixXd WlseProblem::day_scores(const GarchTheta& g) const {
    Eigen::MatrixXd s;
    run(g, &s, nullptr, nullptr);
    return s;
}

Eigen::MatrixXd WlseProblem::hessian(const GarchTheta& g) const {
    Eigen::MatrixXd H(7, 7);
    const auto base = g.to_array();
    for (int j = 0; j < 7; ++j) {
        const double h = 1e-5 * (1.0 + std::abs(base[j]));
        auto up = base, dn = base;
        up[j] += h;
        dn[j] -= h;
        H.col(j) = (gradient(GarchTheta::from_array(up)) - gradient(GarchTheta::from_array(dn))) / (2.0 * h);
    }
    return 0.5 * (H + H.transpose());
}

GarchTheta merge_legs(const Step1& s1, double phi_H, double phi_L) {
    const double wH = 1.0 / phi_H, wL = 1.0 / phi_L;
    return GarchTheta{s1.H.params.omega, s1.L.params.omega,
                      (wH * s1.H.params.gamma + wL * s1.L.params.gamma) / (wH + wL),
                      s1.H.params.alpha, s1.L.params.alpha, s1.H.params.beta, s1.L.params.beta};
}

WlseFit wlse(const filters::FilterInput& in, double phi_H, double phi_L, const EstimationConfig& cfg,
             const std::vector<GarchTheta>& extra_starts, const Step1* step1) {
    require_days(in, cfg, "wlse");
    if (phi_H < cfg.phi_floor || phi_L < cfg.phi_floor)
        throw NumericalError("wlse: residual variance below the floor (degenerate fit)");
    const WlseProblem prob(in, phi_H, phi_L);
    const bool all_const_rv = std::all_of(in.rv.begin(), in.rv.end(), [&](double v) { return v == in.rv.front(); });
    const bool all_const_ov = std::all_of(in.ov.begin(), in.ov.end(), [&](double v) { return v == in.ov.front(); });
    if (all_const_rv && all_const_ov) throw NumericalError("wlse: constant inputs leave the parameters unidentified");

    const auto penalized = [&](const GarchTheta& g) {
        const Matrix2 m = cfg.stationarity == StationarityMatrix::MeanRecursion
                              ? mean_recursion_matrix(g)
                              : printed_stationarity_matrix(g, in.lambda);
        const double norm = spectral_norm_2x2(m);
        const double q = prob.criterion(g);
        return norm < 1.0 ? q : kInfeasible * (1.0 + norm) + q;
    };
    const opt::Objective f = [&](const std::vector<double>& x) { return penalized(theta_from(x)); };
    const opt::Gradient gr = [&](const std::vector<double>& x, std::vector<double>& g) {
        const Eigen::VectorXd v = prob.gradient(theta_from(x));
        g.assign(v.data(), v.data() + v.size());
    };

    const GarchTheta merge = merge_legs(step1 ? *step1 : step1_qmle(in, cfg), phi_H, phi_L);

    const opt::Bounds bounds = garch_bounds(cfg.box);
    WlseFit best;
    best.optim = opt::minimize(f, gr, to_vec(merge), bounds, cfg.optimizer);
    opt::OptimizerConfig single = cfg.optimizer;
    single.starts = 1;
    for (const auto& s : extra_starts) {
        opt::OptimResult r = opt::minimize(f, gr, to_vec(s), bounds, single);
        if (r.value < best.optim.value) {
            r.iterations += best.optim.iterations;
            r.evaluations += best.optim.evaluations;
            best.optim = std::move(r);
        }
    }
    best.theta = theta_from(best.optim.x);
    best.quasi_likelihood = -prob.criterion(best.theta);
    return best;
}

Sandwich sandwich_cov(const filters::FilterInput& in, const GarchTheta& theta, double phi_H, double phi_L) {
    const WlseProblem prob(in, phi_H, phi_L);
    Sandwich s;
    s.A = prob.hessian(theta);
    const Eigen::MatrixXd sc = prob.day_scores(theta);
    const double n = static_cast<double>(prob.n());
    s.B = sc.transpose() * sc / n;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(s.A);
    cod.setThreshold(1e-12);
    s.pseudo_inverse = cod.rank() < s.A.rows();
    const Eigen::MatrixXd Ainv = cod.pseudoInverse();
    s.cov = Ainv * s.B * Ainv / n;
    s.cov = 0.5 * (s.cov + s.cov.transpose());
    return s;
}

ZStat z_statistic(double f_value, const Eigen::VectorXd& grad, const Eigen::MatrixXd& cov, double f0,
                  const std::string& name) {
    if (grad.size() != cov.rows() || cov.rows() != cov.cols()) throw std::invalid_argument("z_statistic: shape mismatch");
    if (grad.cwiseAbs().maxCoeff() == 0.0) throw NumericalError("z_statistic: zero gradient, statistic undefined");
    const double var = grad.dot(cov * grad);
    if (!(var > 0.0)) throw NumericalError("z_statistic: nonpositive delta-method variance");
    ZStat z;
    z.name = name;
    z.estimate = f_value;
    z.null_value = f0;
    z.stat = (f_value - f0) / std::sqrt(var);
    z.p_value = std::min(1.0, 2.0 * gsl_cdf_ugaussian_Q(std::abs(z.stat)));
    return z;
}

Eigen::VectorXd aggregate_gradient(const std::string& which, double lambda, theory::AggregationConvention conv,
                                   const GarchTheta& g) {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(7);
    if (which == "omega_g") {
        d(0) = lambda;
        d(1) = 1.0 - lambda;
    } else if (which == "gamma") {
        d(2) = 1.0;
    } else if (which == "alpha_g") {
        d(3) = lambda;
        if (conv == theory::AggregationConvention::MainText) {
            d(4) = 1.0 - lambda;
        } else {
            d(4) = (1.0 - lambda) * g.gamma;
            d(2) = (1.0 - lambda) * g.alpha_Lg;
        }
    } else if (which == "beta_g") {
        d(5) = lambda;
        d(6) = 1.0 - lambda;
    } else {
        const auto& names = GarchTheta::names();
        const auto it = std::find_if(names.begin(), names.end(), [&](const char* s) { return which == s; });
        if (it == names.end()) throw std::invalid_argument("aggregate_gradient: unknown quantity '" + which + "'");
        d(it - names.begin()) = 1.0;
    }
    return d;
}

FitReport fit_ogi(const filters::FilterInput& in, const EstimationConfig& cfg, const GarchTheta* null_theta) {
    require_days(in, cfg, "fit_ogi");
    const Step1 s1 = step1_qmle(in, cfg);
    const PhiHat phi = residual_variances(in, s1.H.params, s1.L.params);
    if (phi.H < cfg.phi_floor || phi.L < cfg.phi_floor)
        throw NumericalError("fit_ogi: residual variance below the floor (degenerate fit)");
    const WlseFit w = wlse(in, phi.H, phi.L, cfg, {}, &s1);
    FitReport r;
    r.theta_g_hat = w.theta;
    r.thetaH_hat = s1.H.params;
    r.thetaL_hat = s1.L.params;
    r.phi_H_hat = phi.H;
    r.phi_L_hat = phi.L;
    r.objective = w.quasi_likelihood;
    r.iterations = w.optim.iterations + s1.H.optim.iterations + s1.L.optim.iterations;
    r.evaluations = w.optim.evaluations + s1.H.optim.evaluations + s1.L.optim.evaluations;
    r.converged = w.optim.converged && s1.H.optim.converged && s1.L.optim.converged;
    r.constraint_active = w.optim.at_bound;
    r.spectral_norm = spectral_norm_2x2(mean_recursion_matrix(w.theta));
    r.n = in.rv.size();

    const Sandwich sw = sandwich_cov(in, w.theta, phi.H, phi.L);
    r.cov = sw.cov;
    r.cov_pseudo_inverse = sw.pseudo_inverse;

    const auto est = w.theta.to_array();
    const GarchTheta zero{};
    const GarchTheta& nt = null_theta ? *null_theta : zero;
    const auto nul = nt.to_array();
    const auto agg_hat = theory::aggregate_garch(w.theta, in.lambda, cfg.convention);
    const auto agg_null = theory::aggregate_garch(nt, in.lambda, cfg.convention);
    const auto& names = GarchTheta::names();
    auto add = [&](const std::string& name, double value, double f0) {
        try {
            r.z_stats.push_back(
                z_statistic(value, aggregate_gradient(name, in.lambda, cfg.convention, w.theta), r.cov, f0, name));
        } catch (const NumericalError&) {
            ZStat z;
            z.name = name;
            z.estimate = value;
            z.null_value = f0;
            z.stat = std::numeric_limits<double>::quiet_NaN();
            z.p_value = std::numeric_limits<double>::quiet_NaN();
            r.z_stats.push_back(z);
        }
    };
    for (std::size_t k = 0; k < GarchTheta::kSize; ++k) add(names[k], est[k], nul[k]);
    add("omega_g", agg_hat.omega_g, agg_null.omega_g);
    add("alpha_g", agg_hat.alpha_g, agg_null.alpha_g);
    add("beta_g", agg_hat.beta_g, agg_null.beta_g);
    return r;
}

// ---- competitors ---------------------------------------------------------

double gaussian_qlik(const std::vector<double>& h, const std::vector<double>& y) {
    if (h.size() != y.size() || h.empty()) throw std::invalid_argument("gaussian_qlik: length mismatch or empty");
    double s = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (!(h[i] > 0.0) || !std::isfinite(h[i])) return -std::numeric_limits<double>::infinity();
        s += std::log(h[i]) + y[i] / h[i];
    }
    return -s / static_cast<double>(h.size());
}

namespace {

GaussianFit gaussian_fit(const std::function<std::vector<double>(const std::vector<double>&)>& path,
                         const std::vector<double>& proxy, const std::vector<double>& x0, const opt::Bounds& b,
                         const std::function<bool(const std::vector<double>&)>& feasible,
                         const opt::OptimizerConfig& oc) {
    const opt::Objective f = [&](const std::vector<double>& x) {
        const double q = -gaussian_qlik(path(x), proxy);
        return feasible(x) ? q : kInfeasible + q;
    };
    GaussianFit fit;
    fit.optim = opt::minimize(f, nullptr, x0, b, oc);
    fit.params = fit.optim.x;
    fit.qlik = gaussian_qlik(path(fit.params), proxy);
    return fit;
}

std::vector<double> squares(const std::vector<double>& r) {
    std::vector<double> s(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) s[i] = r[i] * r[i];
    return s;
}

void require_len(std::size_t n, const EstimationConfig& cfg, const char* who) {
    if (n < cfg.min_days)
        throw std::invalid_argument(std::string(who) + ": need at least " + std::to_string(cfg.min_days) + " days");
}

}  // namespace

GaussianFit fit_garch11(const std::vector<double>& r, const EstimationConfig& cfg) {
    require_len(r.size(), cfg, "fit_garch11");
    const double v = sample_variance(r);
    const auto& b = cfg.box;
    const opt::Bounds bounds{{b.omega_lo, b.gamma_lo, b.beta_lo}, {b.omega_hi, b.gamma_hi, b.beta_hi}};
    const auto path = [&](const std::vector<double>& x) {
        return filters::filter_garch11({x[0], x[1], x[2], 0.0}, r).h;
    };
    const auto ok = [](const std::vector<double>& x) { return x[1] + x[2] < 1.0; };
    const double w0 = std::clamp(v * 0.15, b.omega_lo * 10, b.omega_hi * 0.5);
    return gaussian_fit(path, squares(r), {w0, 0.75, 0.1}, bounds, ok, cfg.optimizer);
}

GaussianFit fit_gjr11(const std::vector<double>& r, const EstimationConfig& cfg) {
    require_len(r.size(), cfg, "fit_gjr11");
    const double v = sample_variance(r);
    const auto& b = cfg.box;
    const opt::Bounds bounds{{b.omega_lo, b.gamma_lo, b.beta_lo, b.beta_lo},
                             {b.omega_hi, b.gamma_hi, b.beta_hi, b.beta_hi}};
    const auto path = [&](const std::vector<double>& x) {
        return filters::filter_gjr11({x[0], x[1], x[2], x[3]}, r).h;
    };
    const auto ok = [](const std::vector<double>& x) { return x[1] + x[2] + 0.5 * x[3] < 1.0; };
    const double w0 = std::clamp(v * 0.15, b.omega_lo * 10, b.omega_hi * 0.5);
    return gaussian_fit(path, squares(r), {w0, 0.75, 0.05, 0.1}, bounds, ok, cfg.optimizer);
}

GaussianFit fit_realized_garch(const std::vector<double>& rv, const EstimationConfig& cfg) {
    require_len(rv.size(), cfg, "fit_realized_garch");
    const double mu = mean(rv);
    const auto& b = cfg.box;
    const opt::Bounds bounds{{b.omega_lo, b.gamma_lo, b.alpha_lo}, {b.omega_hi, b.gamma_hi, b.alpha_hi}};
    const auto path = [&](const std::vector<double>& x) {
        return filters::filter_realized_garch({x[0], x[1], x[2]}, rv).h;
    };
    const auto ok = [](const std::vector<double>& x) { return x[1] + x[2] < 1.0; };
    const double w0 = std::clamp(mu * 0.3, b.omega_lo * 10, b.omega_hi * 0.5);
    return gaussian_fit(path, rv, {w0, 0.4, 0.3}, bounds, ok, cfg.optimizer);
}

GaussianFit fit_a_ogi(const filters::FilterInput& in, filters::AOgiDivisors divisors, const EstimationConfig& cfg) {
    require_days(in, cfg, "fit_a_ogi");
    std::vector<double> proxy(in.rv.size());
    for (std::size_t i = 0; i < proxy.size(); ++i) proxy[i] = in.rv[i] + in.ov[i];
    const double lambda = in.lambda;
    const double rv_div = divisors == filters::AOgiDivisors::Printed ? 1.0 - lambda : lambda;
    const double ov_div = divisors == filters::AOgiDivisors::Printed ? lambda : 1.0 - lambda;
    const double mu = mean(proxy), mrv = mean(in.rv), mov = mean(in.ov);
    const auto& b = cfg.box;
    const opt::Bounds bounds{{b.omega_lo, b.gamma_lo, b.alpha_lo, b.beta_lo},
                             {b.omega_hi, b.gamma_hi, b.alpha_hi, b.beta_hi}};
    const auto path = [&](const std::vector<double>& x) {
        return filters::filter_a_ogi({x[0], x[1], x[2], x[3]}, in, divisors).h;
    };
    // Mean of the recursion must stay finite: gamma + alpha E[RV]/(div h) + beta E[OV]/(div h) < 1.
    const auto ok = [&](const std::vector<double>& x) {
        return x[1] + (x[2] * mrv / rv_div + x[3] * mov / ov_div) / mu < 1.0;
    };
    filters::AOgiParams s{0.0, 0.4, 0.1, 0.1};
    s.omega = std::max(mu * (1.0 - s.gamma) - s.alpha * mrv / rv_div - s.beta * mov / ov_div, 0.05 * mu);
    s.omega = std::clamp(s.omega, b.omega_lo * 10, b.omega_hi * 0.5);
    return gaussian_fit(path, proxy, {s.omega, s.gamma, s.alpha, s.beta}, bounds, ok, cfg.optimizer);
}

GaussianFit fit_gjr_ogi(const filters::FilterInput& in, const std::vector<double>& session_returns,
                        const std::vector<double>& overnight_returns, const EstimationConfig& cfg) {
    require_days(in, cfg, "fit_gjr_ogi");
    if (session_returns.size() != in.rv.size() || overnight_returns.size() != in.rv.size())
        throw std::invalid_argument("fit_gjr_ogi: return series length mismatch");
    std::vector<double> proxy(in.rv.size());
    for (std::size_t i = 0; i < proxy.size(); ++i) proxy[i] = in.rv[i] + in.ov[i];
    const double lambda = in.lambda;
    const double mu = mean(proxy), mrv = mean(in.rv), mov = mean(in.ov);
    const double sdH = std::sqrt(sample_variance(session_returns));
    const double sdL = std::sqrt(sample_variance(overnight_returns));
    const auto [minH, maxH] = std::minmax_element(session_returns.begin(), session_returns.end());
    const auto [minL, maxL] = std::minmax_element(overnight_returns.begin(), overnight_returns.end());

    const auto& b = cfg.box;
    const auto path = [&](const std::vector<double>& x) {
        return filters::filter_gjr_ogi({x[0], x[1], x[2], x[3], x[4], x[5], x[6], x[7]}, in, session_returns,
                                       overnight_returns)
            .h;
    };
    const auto ok = [&](const std::vector<double>& x) {
        return x[1] + ((x[2] + 0.5 * x[4]) * mrv / lambda + (x[3] + 0.5 * x[5]) * mov / (1.0 - lambda)) / mu < 1.0;
    };
    const double w0 = std::clamp(mu * 0.4, b.omega_lo * 10, b.omega_hi * 0.5);

    opt::OptimizerConfig grid_cfg = cfg.optimizer;
    grid_cfg.starts = 1;
    GaussianFit best;
    best.qlik = -std::numeric_limits<double>::infinity();
    for (double cH : {-sdH, 0.0, sdH}) {
        for (double cL : {-sdL, 0.0, sdL}) {
            const opt::Bounds pinned{{b.omega_lo, b.gamma_lo, b.alpha_lo, b.beta_lo, 0.0, 0.0, cH, cL},
                                     {b.omega_hi, b.gamma_hi, b.alpha_hi, b.beta_hi, b.alpha_hi, b.beta_hi, cH, cL}};
            GaussianFit f =
                gaussian_fit(path, proxy, {w0, 0.4, 0.1, 0.1, 0.02, 0.02, cH, cL}, pinned, ok, grid_cfg);
            if (f.qlik > best.qlik) best = std::move(f);
        }
    }
    // Refine with the thresholds free inside the observed return range.
    const double spanH = std::max(*maxH - *minH, 1e-12), spanL = std::max(*maxL - *minL, 1e-12);
    const opt::Bounds full{{b.omega_lo, b.gamma_lo, b.alpha_lo, b.beta_lo, 0.0, 0.0, *minH - 0.01 * spanH,
                            *minL - 0.01 * spanL},
                           {b.omega_hi, b.gamma_hi, b.alpha_hi, b.beta_hi, b.alpha_hi, b.beta_hi,
                            *maxH + 0.01 * spanH, *maxL + 0.01 * spanL}};
    std::vector<double> start = best.params;
    start[4] = std::max(start[4], 1e-4);
    start[5] = std::max(start[5], 1e-4);
    // The threshold coordinates make the surface piecewise flat; the simplex
    // needs more room than the smaller models.
    opt::OptimizerConfig refine_cfg = grid_cfg;
    refine_cfg.max_evaluations = 3 * cfg.optimizer.max_evaluations;
    GaussianFit refined = gaussian_fit(path, proxy, start, full, ok, refine_cfg);
    if (refined.qlik > best.qlik) best = std::move(refined);
    return best;
}

}  // namespace ogi::est
