#include "ogi/filters.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ogi::filters {

namespace {

void require_nonempty(std::size_t n, const char* who) {
    if (n == 0) throw std::invalid_argument(std::string(who) + ": empty input");
}

void require_same_length(std::size_t a, std::size_t b, const char* who) {
    if (a != b) throw std::invalid_argument(std::string(who) + ": input lengths differ");
}

}  // namespace

void FilterInput::check() const {
    require_nonempty(rv.size(), "FilterInput");
    require_same_length(rv.size(), ov.size(), "FilterInput");
    if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("FilterInput: lambda must lie in (0,1)");
    for (std::size_t i = 0; i < rv.size(); ++i) {
        if (!(rv[i] >= 0.0) || !std::isfinite(rv[i]))
            throw std::invalid_argument("FilterInput: rv[" + std::to_string(i) + "] is negative or not finite");
        if (!(ov[i] >= 0.0) || !std::isfinite(ov[i]))
            throw std::invalid_argument("FilterInput: ov[" + std::to_string(i) + "] is negative or not finite");
    }
}

double FilterInput::initial_hH() const {
    if (h0H) return *h0H;
    require_nonempty(rv.size(), "FilterInput");
    return rv.front();
}

double FilterInput::initial_hL() const {
    if (h0L) return *h0L;
    require_nonempty(ov.size(), "FilterInput");
    // ov is the squared return; with zero drift its mean is the variance, but
    // the signed series is not available here, so use the second moment.
    return std::accumulate(ov.begin(), ov.end(), 0.0) / static_cast<double>(ov.size());
}

Series filter_leg(const LegParams& p, const std::vector<double>& rv, const std::vector<double>& ov, double lambda,
                  double h0) {
    require_nonempty(rv.size(), "filter_leg");
    require_same_length(rv.size(), ov.size(), "filter_leg");
    const double a = p.alpha / lambda;
    const double b = p.beta / (1.0 - lambda);
    Series s;
    s.h.resize(rv.size());
    double h = h0;
    for (std::size_t i = 0; i < rv.size(); ++i) {
        s.h[i] = h;
        h = p.omega + p.gamma * h + a * rv[i] + b * ov[i];
    }
    s.h_next = h;
    return s;
}

VolSeries filter_ogi(const GarchTheta& g, const FilterInput& in, theory::AggregationConvention convention) {
    in.check();
    const double lambda = in.lambda;
    const double h0H = in.initial_hH();
    const double h0L = in.initial_hL();
    const auto agg = theory::aggregate_garch(g, lambda, convention);

    Series H = filter_leg({g.omega_Hg, g.gamma, g.alpha_Hg, g.beta_Hg}, in.rv, in.ov, lambda, h0H);
    Series L = filter_leg({g.omega_Lg, g.gamma, g.alpha_Lg, g.beta_Lg}, in.rv, in.ov, lambda, h0L);
    Series D = filter_leg({agg.omega_g, g.gamma, agg.alpha_g, agg.beta_g}, in.rv, in.ov, lambda,
                          lambda * h0H + (1.0 - lambda) * h0L);

    VolSeries out;
    out.rv = in.rv;
    out.ov = in.ov;
    out.hH = std::move(H.h);
    out.hL = std::move(L.h);
    out.h = std::move(D.h);
    out.hH_next = H.h_next;
    out.hL_next = L.h_next;
    out.h_next = D.h_next;
    return out;
}

VolSeries filter_s_ogi(const LegParams& Hp, const LegParams& Lp, const FilterInput& in) {
    in.check();
    const double lambda = in.lambda;
    Series H = filter_leg(Hp, in.rv, in.ov, lambda, in.initial_hH());
    Series L = filter_leg(Lp, in.rv, in.ov, lambda, in.initial_hL());
    VolSeries out;
    out.rv = in.rv;
    out.ov = in.ov;
    out.h.resize(H.h.size());
    for (std::size_t i = 0; i < H.h.size(); ++i) out.h[i] = lambda * H.h[i] + (1.0 - lambda) * L.h[i];
    out.hH = std::move(H.h);
    out.hL = std::move(L.h);
    out.hH_next = H.h_next;
    out.hL_next = L.h_next;
    out.h_next = lambda * out.hH_next + (1.0 - lambda) * out.hL_next;
    return out;
}

Series filter_a_ogi(const AOgiParams& p, const FilterInput& in, AOgiDivisors divisors, std::optional<double> h0) {
    in.check();
    const double lambda = in.lambda;
    const double rv_div = divisors == AOgiDivisors::Printed ? 1.0 - lambda : lambda;
    const double ov_div = divisors == AOgiDivisors::Printed ? lambda : 1.0 - lambda;
    double h = h0 ? *h0 : in.rv.front() + in.ov.front();
    Series s;
    s.h.resize(in.rv.size());
    for (std::size_t i = 0; i < in.rv.size(); ++i) {
        s.h[i] = h;
        h = p.omega + p.gamma * h + p.alpha / rv_div * in.rv[i] + p.beta / ov_div * in.ov[i];
    }
    s.h_next = h;
    return s;
}

GjrOgiParams GjrOgiParams::from_garch(const GarchTheta& g, double lambda, theory::AggregationConvention convention) {
    const auto agg = theory::aggregate_garch(g, lambda, convention);
    GjrOgiParams p;
    p.omega = agg.omega_g;
    p.gamma = g.gamma;
    p.alpha = agg.alpha_g;
    p.beta = agg.beta_g;
    return p;
}

Series filter_gjr_ogi(const GjrOgiParams& p, const FilterInput& in, const std::vector<double>& session_returns,
                      const std::vector<double>& overnight_returns, std::optional<double> h0) {
    in.check();
    require_same_length(in.rv.size(), session_returns.size(), "filter_gjr_ogi");
    require_same_length(in.rv.size(), overnight_returns.size(), "filter_gjr_ogi");
    const double lambda = in.lambda;
    double h = h0 ? *h0 : lambda * in.initial_hH() + (1.0 - lambda) * in.initial_hL();
    Series s;
    s.h.resize(in.rv.size());
    for (std::size_t i = 0; i < in.rv.size(); ++i) {
        s.h[i] = h;
        // Same operation order as filter_leg so that a = b = 0 is bit-identical.
        const double alpha = p.alpha + (session_returns[i] < p.c_H ? p.a : 0.0);
        const double beta = p.beta + (overnight_returns[i] < p.c_L ? p.b : 0.0);
        h = p.omega + p.gamma * h + alpha / lambda * in.rv[i] + beta / (1.0 - lambda) * in.ov[i];
    }
    s.h_next = h;
    return s;
}

namespace {

Series garch_like(const GarchParams& p, const std::vector<double>& r, std::optional<double> h0, bool asymmetric,
                  const char* who) {
    if (r.size() < 2 && !h0) throw std::invalid_argument(std::string(who) + ": need at least 2 returns");
    require_nonempty(r.size(), who);
    double h = h0 ? *h0 : sample_variance(r);
    Series s;
    s.h.resize(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        s.h[i] = h;
        const double r2 = r[i] * r[i];
        h = p.omega + p.gamma * h + p.beta * r2;
        if (asymmetric && r[i] < 0.0) h += p.beta_neg * r2;
    }
    s.h_next = h;
    return s;
}

}  // namespace

Series filter_garch11(const GarchParams& p, const std::vector<double>& returns, std::optional<double> h0) {
    return garch_like(p, returns, h0, false, "filter_garch11");
}

Series filter_gjr11(const GarchParams& p, const std::vector<double>& returns, std::optional<double> h0) {
    return garch_like(p, returns, h0, true, "filter_gjr11");
}

Series filter_realized_garch(const RealizedGarchParams& p, const std::vector<double>& rv, std::optional<double> h0) {
    require_nonempty(rv.size(), "filter_realized_garch");
    double h = h0 ? *h0 : rv.front();
    Series s;
    s.h.resize(rv.size());
    for (std::size_t i = 0; i < rv.size(); ++i) {
        s.h[i] = h;
        h = p.omega + p.gamma * h + p.alpha * rv[i];
    }
    s.h_next = h;
    return s;
}

double overnight_adjustment(const std::vector<double>& rv, const std::vector<double>& ov, int* skipped) {
    require_same_length(rv.size(), ov.size(), "overnight_adjustment");
    double sum = 0.0;
    int used = 0, skip = 0;
    for (std::size_t i = 0; i < rv.size(); ++i) {
        if (rv[i] > 0.0) {
            sum += ov[i] / rv[i];
            ++used;
        } else {
            ++skip;
        }
    }
    if (skipped) *skipped = skip;
    if (used == 0) throw NumericalError("overnight_adjustment: no day with positive RV");
    return 1.0 + sum / used;
}

namespace {

// Regressors for predicting x[t] from x[t-1], mean x[t-5..t-1], mean x[t-22..t-1].
Eigen::RowVector4d har_row(const std::vector<double>& x, std::size_t t) {
    double m5 = 0.0, m22 = 0.0;
    for (std::size_t k = 1; k <= 22; ++k) {
        if (k <= 5) m5 += x[t - k];
        m22 += x[t - k];
    }
    return {1.0, x[t - 1], m5 / 5.0, m22 / 22.0};
}

std::vector<double> transform(const std::vector<double>& rv, bool log_scale) {
    if (!log_scale) return rv;
    std::vector<double> out(rv.size());
    for (std::size_t i = 0; i < rv.size(); ++i) {
        if (!(rv[i] > 0.0)) throw NumericalError("log-HAR: RV must be positive (day " + std::to_string(i + 1) + ")");
        out[i] = std::log(rv[i]);
    }
    return out;
}

}  // namespace

HarFit fit_har(const std::vector<double>& rv, bool log_scale) {
    if (rv.size() < kHarMinObs) throw std::invalid_argument("fit_har: need at least 23 observations");
    const std::vector<double> x = transform(rv, log_scale);
    const std::size_t rows = x.size() - 22;
    Eigen::MatrixXd X(rows, 4);
    Eigen::VectorXd y(rows);
    for (std::size_t t = 22; t < x.size(); ++t) {
        X.row(t - 22) = har_row(x, t);
        y(t - 22) = x[t];
    }
    // Minimum-norm least squares: collinear regressors (e.g. a constant
    // series) still give the intercept-only reproduction.
    const Eigen::Vector4d b = X.completeOrthogonalDecomposition().solve(y);
    const Eigen::VectorXd resid = y - X * b;
    HarFit f;
    f.b0 = b(0);
    f.b1 = b(1);
    f.b5 = b(2);
    f.b22 = b(3);
    f.log_scale = log_scale;
    f.resid_var = rows > 4 ? resid.squaredNorm() / static_cast<double>(rows - 4) : 0.0;
    return f;
}

double har_forecast(const HarFit& fit, const std::vector<double>& history, bool* floored) {
    if (history.size() < 22) throw std::invalid_argument("har_forecast: need at least 22 days of history");
    const std::vector<double> x = transform(history, fit.log_scale);
    const Eigen::RowVector4d row = har_row(x, x.size());
    double v = fit.b0 * row(0) + fit.b1 * row(1) + fit.b5 * row(2) + fit.b22 * row(3);
    if (fit.log_scale) v = std::exp(v + 0.5 * fit.resid_var);
    if (floored) *floored = v < kForecastFloor;
    return std::max(v, kForecastFloor);
}

std::vector<double> har_fitted(const HarFit& fit, const std::vector<double>& rv) {
    if (rv.size() < kHarMinObs) throw std::invalid_argument("har_fitted: need at least 23 observations");
    std::vector<double> out(rv.size());
    for (std::size_t t = 22; t < rv.size(); ++t) {
        const std::vector<double> hist(rv.begin(), rv.begin() + static_cast<std::ptrdiff_t>(t));
        out[t] = har_forecast(fit, hist);
    }
    for (std::size_t t = 0; t < 22; ++t) out[t] = out[22];
    return out;
}

}  // namespace ogi::filters
