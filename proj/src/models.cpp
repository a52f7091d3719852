#include "ogi/models.hpp"

#include <algorithm>
#include <stdexcept>

namespace ogi::models {

void DailyData::check() const {
    const std::size_t n = rv.size();
    if (ov.size() != n || open_to_open.size() != n || session_returns.size() != n || overnight_returns.size() != n)
        throw std::invalid_argument("DailyData: series lengths differ");
    if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("DailyData: lambda must lie in (0, 1)");
    for (std::size_t i = 0; i < n; ++i)
        if (!(rv[i] >= 0.0) || !(ov[i] >= 0.0))
            throw std::invalid_argument("DailyData: negative or non-finite RV/OV on day " + std::to_string(i + 1));
}

DailyData DailyData::slice(std::size_t b, std::size_t e) const {
    if (b > e || e > size()) throw std::out_of_range("DailyData::slice: bad range");
    auto cut = [&](const std::vector<double>& v) { return std::vector<double>(v.begin() + b, v.begin() + e); };
    return {cut(rv), cut(ov), cut(open_to_open), cut(session_returns), cut(overnight_returns), lambda};
}

filters::FilterInput DailyData::filter_input() const {
    filters::FilterInput in;
    in.rv = rv;
    in.ov = ov;
    in.lambda = lambda;
    if (overnight_returns.size() >= 2) in.h0L = sample_variance(overnight_returns);
    return in;
}

std::vector<double> DailyData::realized_total() const {
    std::vector<double> t(rv.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = rv[i] + ov[i];
    return t;
}

DailyData DailyData::from_prices(const std::vector<double>& open, const std::vector<double>& close,
                                 const std::vector<double>& rv, double lambda) {
    const std::size_t n = open.size();
    if (close.size() != n || rv.size() != n)
        throw std::invalid_argument("DailyData::from_prices: open, close and RV lengths differ");
    if (n < 2) throw std::invalid_argument("DailyData::from_prices: need at least 2 days");
    DailyData d;
    d.lambda = lambda;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double on = open[i + 1] - close[i];
        d.rv.push_back(rv[i]);
        d.ov.push_back(on * on);
        d.overnight_returns.push_back(on);
        d.session_returns.push_back(close[i] - open[i]);
        d.open_to_open.push_back(open[i + 1] - open[i]);
    }
    d.check();
    return d;
}

namespace {

struct Names {
    Model m;
    const char* name;
};

constexpr Names kNames[] = {{Model::Ogi, "ogi"},       {Model::SOgi, "s-ogi"},   {Model::AOgi, "a-ogi"},
                            {Model::GjrOgi, "gjr-ogi"}, {Model::Garch, "garch"},  {Model::Gjr, "gjr"},
                            {Model::RGarch, "rgarch"},  {Model::Har, "har"},      {Model::LogHar, "loghar"}};

bool session_only(Model m) { return m == Model::RGarch || m == Model::Har || m == Model::LogHar; }

}  // namespace

std::string to_string(Model m) {
    for (const auto& n : kNames)
        if (n.m == m) return n.name;
    throw std::invalid_argument("unknown model");
}

Model model_from_string(const std::string& s) {
    for (const auto& n : kNames)
        if (s == n.name) return n.m;
    throw std::invalid_argument("unknown model '" + s +
                                "' (expected ogi, s-ogi, a-ogi, gjr-ogi, garch, gjr, rgarch, har or loghar)");
}

const std::vector<Model>& all_models() {
    static const std::vector<Model> v = {Model::Ogi,   Model::SOgi, Model::AOgi,   Model::GjrOgi, Model::Garch,
                                         Model::Gjr,   Model::RGarch, Model::Har,  Model::LogHar};
    return v;
}

ReturnConvention return_convention(Model m) {
    return session_only(m) ? ReturnConvention::OpenToClose : ReturnConvention::OpenToOpen;
}

std::string to_string(ReturnConvention c) {
    return c == ReturnConvention::OpenToOpen ? "open-to-open" : "open-to-close";
}

const std::vector<double>& model_returns(Model m, const DailyData& d) {
    return session_only(m) ? d.session_returns : d.open_to_open;
}

std::vector<std::string> param_names(Model m) {
    switch (m) {
        case Model::Ogi: {
            const auto& n = GarchTheta::names();
            return {n.begin(), n.end()};
        }
        case Model::SOgi:
            return {"omega_H", "gamma_H", "alpha_H", "beta_H", "omega_L", "gamma_L", "alpha_L", "beta_L"};
        case Model::AOgi: return {"omega", "gamma", "alpha", "beta"};
        case Model::GjrOgi: return {"omega", "gamma", "alpha", "beta", "a", "b", "c_H", "c_L"};
        case Model::Garch: return {"omega", "gamma", "beta"};
        case Model::Gjr: return {"omega", "gamma", "beta", "beta_neg"};
        case Model::RGarch: return {"omega", "gamma", "alpha"};
        case Model::Har:
        case Model::LogHar: return {"b0", "b1", "b5", "b22", "resid_var"};
    }
    throw std::invalid_argument("unknown model");
}

ModelFit fit_model(Model m, const DailyData& d, const est::EstimationConfig& cfg) {
    d.check();
    ModelFit f;
    f.model = m;
    f.n = d.size();
    if (session_only(m)) f.adjustment = filters::overnight_adjustment(d.rv, d.ov);
    auto take = [&](const est::GaussianFit& g) {
        f.params = g.params;
        f.objective = g.qlik;
        f.converged = g.optim.converged;
    };
    switch (m) {
        case Model::Ogi: {
            const est::FitReport r = est::fit_ogi(d.filter_input(), cfg);
            const auto a = r.theta_g_hat.to_array();
            f.params.assign(a.begin(), a.end());
            f.objective = r.objective;
            f.converged = r.converged;
            f.z_stats = r.z_stats;
            break;
        }
        case Model::SOgi: {
            const est::Step1 s = est::step1_qmle(d.filter_input(), cfg);
            f.params = {s.H.params.omega, s.H.params.gamma, s.H.params.alpha, s.H.params.beta,
                        s.L.params.omega, s.L.params.gamma, s.L.params.alpha, s.L.params.beta};
            f.objective = s.H.qlik + s.L.qlik;
            f.converged = s.H.optim.converged && s.L.optim.converged;
            break;
        }
        case Model::AOgi: take(est::fit_a_ogi(d.filter_input(), filters::AOgiDivisors::Printed, cfg)); break;
        case Model::GjrOgi:
            take(est::fit_gjr_ogi(d.filter_input(), d.session_returns, d.overnight_returns, cfg));
            break;
        case Model::Garch: take(est::fit_garch11(d.open_to_open, cfg)); break;
        case Model::Gjr: take(est::fit_gjr11(d.open_to_open, cfg)); break;
        case Model::RGarch: take(est::fit_realized_garch(d.rv, cfg)); break;
        case Model::Har:
        case Model::LogHar: {
            const filters::HarFit h = filters::fit_har(d.rv, m == Model::LogHar);
            f.params = {h.b0, h.b1, h.b5, h.b22, h.resid_var};
            f.objective = -h.resid_var;
            f.converged = true;
            break;
        }
    }
    return f;
}

ModelPath run_model(const ModelFit& f, const DailyData& d) {
    d.check();
    if (f.params.size() != param_names(f.model).size())
        throw std::invalid_argument("run_model: parameter vector does not match model " + to_string(f.model));
    const auto& p = f.params;
    ModelPath out;
    auto set = [&](std::vector<double> h, double next) {
        out.fitted_return_scale = h;
        out.forecast_return_scale = next;
        for (double& v : h) v *= f.adjustment;
        out.fitted = std::move(h);
        out.forecast = next * f.adjustment;
    };
    const filters::FilterInput in = d.filter_input();
    switch (f.model) {
        case Model::Ogi: {
            std::array<double, GarchTheta::kSize> a{};
            std::copy(p.begin(), p.end(), a.begin());
            VolSeries v = filters::filter_ogi(GarchTheta::from_array(a), in);
            set(std::move(v.h), v.h_next);
            break;
        }
        case Model::SOgi: {
            VolSeries v = filters::filter_s_ogi({p[0], p[1], p[2], p[3]}, {p[4], p[5], p[6], p[7]}, in);
            set(std::move(v.h), v.h_next);
            break;
        }
        case Model::AOgi: {
            filters::Series s = filters::filter_a_ogi({p[0], p[1], p[2], p[3]}, in, filters::AOgiDivisors::Printed);
            set(std::move(s.h), s.h_next);
            break;
        }
        case Model::GjrOgi: {
            filters::Series s = filters::filter_gjr_ogi({p[0], p[1], p[2], p[3], p[4], p[5], p[6], p[7]}, in,
                                                        d.session_returns, d.overnight_returns);
            set(std::move(s.h), s.h_next);
            break;
        }
        case Model::Garch: {
            filters::Series s = filters::filter_garch11({p[0], p[1], p[2], 0.0}, d.open_to_open);
            set(std::move(s.h), s.h_next);
            break;
        }
        case Model::Gjr: {
            filters::Series s = filters::filter_gjr11({p[0], p[1], p[2], p[3]}, d.open_to_open);
            set(std::move(s.h), s.h_next);
            break;
        }
        case Model::RGarch: {
            filters::Series s = filters::filter_realized_garch({p[0], p[1], p[2]}, d.rv);
            set(std::move(s.h), s.h_next);
            break;
        }
        case Model::Har:
        case Model::LogHar: {
            filters::HarFit h;
            h.b0 = p[0];
            h.b1 = p[1];
            h.b5 = p[2];
            h.b22 = p[3];
            h.resid_var = p[4];
            h.log_scale = f.model == Model::LogHar;
            set(filters::har_fitted(h, d.rv), filters::har_forecast(h, d.rv));
            break;
        }
    }
    return out;
}

}  // namespace ogi::models
