#include "ogi/backtest.hpp"

#include <gsl/gsl_cdf.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <stdexcept>
#include <thread>

namespace ogi::eval {

void BacktestConfig::check() const {
    if (window < 30) throw std::invalid_argument("backtest: window must be at least 30 days");
    if (refit_stride < 1) throw std::invalid_argument("backtest: refit stride must be at least 1");
    for (double q : q0)
        if (!(q > 0.0 && q <= 0.5)) throw std::invalid_argument("backtest: q0 values must lie in (0, 0.5]");
    for (double x : xi)
        if (!(x > 0.0)) throw std::invalid_argument("backtest: xi values must be positive");
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("OGI_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min<long>(v, 1024));
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Runs tasks 0..n-1 on a small pool. Each task writes only its own slot, so
// results do not depend on scheduling.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& task) {
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                task(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int k = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), n));
    if (k <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < k; ++t) pool.emplace_back(worker);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

const std::vector<std::string> kZNames = {"omega_g", "gamma", "alpha_g", "beta_g"};

}  // namespace

std::vector<ModelForecasts> rolling_forecasts(const models::DailyData& data, const std::vector<models::Model>& models,
                                              const BacktestConfig& cfg) {
    cfg.check();
    data.check();
    const std::size_t n = data.size(), W = cfg.window;
    if (n <= W)
        throw std::invalid_argument("backtest: need more than " + std::to_string(W) + " days, got " +
                                    std::to_string(n));
    if (models.empty()) throw std::invalid_argument("backtest: no models given");
    const std::size_t days = n - W;
    std::vector<std::size_t> refit_at;
    for (std::size_t t = W; t < n; t += cfg.refit_stride) refit_at.push_back(t);
    const int threads = resolve_threads(cfg.threads);

    // Fits: one per (model, refit point). A failed fit falls back to the
    // previous successful one for the same model.
    const std::size_t R = refit_at.size();
    std::vector<std::optional<models::ModelFit>> fits(models.size() * R);
    std::vector<std::string> fit_errors(fits.size());
    parallel_for(fits.size(), threads, [&](std::size_t k) {
        const std::size_t mi = k / R, r = k % R;
        const std::size_t t = refit_at[r];
        try {
            fits[k] = models::fit_model(models[mi], data.slice(t - W, t), cfg.estimation);
        } catch (const std::exception& e) {
            fit_errors[k] = e.what();
        }
    });

    std::vector<ModelForecasts> out(models.size());
    for (std::size_t mi = 0; mi < models.size(); ++mi) {
        auto& f = out[mi];
        f.model = models[mi];
        f.forecast.resize(days);
        f.forecast_return_scale.resize(days);
        f.returns.resize(days);
        for (double q : cfg.q0) f.var[q].resize(days);
        std::optional<std::size_t> last_ok;
        std::vector<std::size_t> use(R);
        for (std::size_t r = 0; r < R; ++r) {
            const std::size_t k = mi * R + r;
            ++f.refits;
            if (fits[k]) {
                last_ok = k;
                if (!fits[k]->converged) ++f.nonconverged_refits;
                if (f.model == models::Model::Ogi) {
                    std::vector<est::ZStat> zs;
                    for (const auto& z : fits[k]->z_stats)
                        if (std::find(kZNames.begin(), kZNames.end(), z.name) != kZNames.end()) zs.push_back(z);
                    f.z_stats.push_back(std::move(zs));
                }
            } else {
                ++f.nonconverged_refits;
                if (!last_ok)
                    throw NumericalError("backtest: model " + models::to_string(f.model) +
                                         " failed on its first window: " + fit_errors[k]);
            }
            use[r] = *last_ok;
        }
        const auto& rets = models::model_returns(f.model, data);
        parallel_for(days, threads, [&](std::size_t j) {
            const std::size_t t = W + j;
            const models::ModelFit& fit = *fits[use[j / cfg.refit_stride]];
            const models::DailyData win = data.slice(t - W, t);
            const models::ModelPath p = models::run_model(fit, win);
            f.forecast[j] = p.forecast;
            f.forecast_return_scale[j] = p.forecast_return_scale;
            f.returns[j] = rets[t];
            const std::vector<double> in_rets(rets.begin() + static_cast<std::ptrdiff_t>(t - W),
                                              rets.begin() + static_cast<std::ptrdiff_t>(t));
            for (double q : cfg.q0)
                f.var.at(q)[j] =
                    var_forecast(in_rets, p.fitted_return_scale, p.forecast_return_scale, q, cfg.var_min_in_sample);
        });
    }
    return out;
}

ModelReport evaluate_model(const ModelForecasts& f, const std::vector<double>& realized,
                           const ModelForecasts* baseline, const BacktestConfig& cfg) {
    ModelReport r;
    r.model = models::to_string(f.model);
    r.return_convention = models::to_string(models::return_convention(f.model));
    r.refits = f.refits;
    r.nonconverged_refits = f.nonconverged_refits;
    const auto se = squared_errors(f.forecast, realized);
    const auto ql = qlike_terms(f.forecast, realized);
    r.mspe = sample_mean(se);
    r.qlike = sample_mean(ql);
    if (baseline && baseline->model != f.model) {
        try {
            r.dm_mspe = dm_test(se, squared_errors(baseline->forecast, realized), cfg.dm_lag);
            r.dm_qlike = dm_test(ql, qlike_terms(baseline->forecast, realized), cfg.dm_lag);
        } catch (const std::exception& e) {
            r.dm_mspe.reset();
            r.dm_qlike.reset();
            r.dm_error = e.what();
        }
    }
    for (const auto& [q, var] : f.var) {
        CoverageResult c;
        try {
            const std::vector<int> h = hits(f.returns, var);
            c.hit_rate = sample_mean(std::vector<double>(h.begin(), h.end()));
            c.lruc = lruc(h, q);
            c.lrcc = lrcc(h, q);
            c.dq = dq_test(h, q, var, cfg.dq_lags);
        } catch (const std::exception& e) {
            c.error = e.what();
        }
        r.coverage[q] = c;
    }
    for (double xi : cfg.xi) {
        try {
            const UtilityResult u = utility_backtest(f.returns, f.forecast_return_scale, xi);
            r.utility[xi] = {u.sharpe, u.expected_utility};
        } catch (const std::exception&) {
            // Too few forecast days for a utility figure.
        }
    }
    try {
        r.persistence = persistence_regression(realized, f.forecast);
    } catch (const std::exception& e) {
        r.persistence_error = e.what();
    }
    return r;
}

BacktestResult run_backtest(const models::DailyData& data, const std::vector<models::Model>& models,
                            const BacktestConfig& cfg) {
    BacktestResult res;
    res.config = cfg;
    res.forecasts = rolling_forecasts(data, models, cfg);
    res.first_day = cfg.window;
    const auto total = data.realized_total();
    res.realized_total.assign(total.begin() + static_cast<std::ptrdiff_t>(cfg.window), total.end());
    const ModelForecasts* base = nullptr;
    for (const auto& f : res.forecasts)
        if (f.model == cfg.baseline) base = &f;
    res.baseline = base ? models::to_string(cfg.baseline) : "";
    for (const auto& f : res.forecasts) res.reports.push_back(evaluate_model(f, res.realized_total, base, cfg));
    return res;
}

std::vector<std::pair<double, double>> normal_qq(std::vector<double> x) {
    x.erase(std::remove_if(x.begin(), x.end(), [](double v) { return !std::isfinite(v); }), x.end());
    std::sort(x.begin(), x.end());
    std::vector<std::pair<double, double>> out(x.size());
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = {gsl_cdf_ugaussian_Pinv((i + 0.5) / n), x[i]};
    return out;
}

}  // namespace ogi::eval
