#include "ogi/prv.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ogi::prv {

double triangle(double x) { return std::min(x, 1.0 - x); }

double psi(const Weight& g) {
    if (!g) return 1.0 / 12.0;
    constexpr int panels = 1024;
    const double h = 1.0 / panels;
    double s = 0.0;
    for (int i = 0; i <= panels; ++i) {
        const double v = g(i * h);
        const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += w * v * v;
    }
    const double r = s * h / 3.0;
    if (!(r > 0.0)) throw std::invalid_argument("psi: weight function has zero energy");
    return r;
}

int PrvConfig::bandwidth(std::size_t m) const {
    const int k = K ? *K : static_cast<int>(std::floor(std::sqrt(static_cast<double>(m))));
    if (k < 2 || static_cast<std::size_t>(k) > m)
        throw std::invalid_argument("PRV bandwidth K=" + std::to_string(k) + " must satisfy 2 <= K <= m");
    return k;
}

namespace {

const Weight& weight_or_default(const Weight& g) {
    static const Weight tri = triangle;
    return g ? g : tri;
}

std::vector<double> increments(const std::vector<double>& y) {
    std::vector<double> d(y.size() > 0 ? y.size() - 1 : 0);
    for (std::size_t i = 1; i < y.size(); ++i) d[i - 1] = y[i] - y[i - 1];
    return d;
}

}  // namespace

std::vector<double> preaverage(const std::vector<double>& ticks, int K, const Weight& gin) {
    const Weight& g = weight_or_default(gin);
    if (K < 2) throw std::invalid_argument("preaverage: K must be >= 2");
    if (ticks.size() < static_cast<std::size_t>(K) + 1)
        throw std::invalid_argument("preaverage: need at least K increments");
    const std::vector<double> d = increments(ticks);  // d[i-1] = Y_i - Y_{i-1}
    const std::size_t m = d.size();
    std::vector<double> w(K);
    for (int l = 1; l < K; ++l) w[l] = g(static_cast<double>(l) / K);
    std::vector<double> out(m - K + 1);
    for (std::size_t k = 1; k <= m - K + 1; ++k) {
        double s = 0.0;
        for (int l = 1; l < K; ++l) s += w[l] * d[k + l - 1];
        out[k - 1] = s;
    }
    return out;
}

std::vector<double> noise_correction(const std::vector<double>& ticks, int K, const Weight& gin) {
    const Weight& g = weight_or_default(gin);
    if (K < 2) throw std::invalid_argument("noise_correction: K must be >= 2");
    if (ticks.size() < static_cast<std::size_t>(K) + 1)
        throw std::invalid_argument("noise_correction: need at least K increments");
    const std::vector<double> d = increments(ticks);
    const std::size_t m = d.size();
    std::vector<double> w(K + 1);
    for (int l = 1; l <= K; ++l) {
        const double dg = g(static_cast<double>(l) / K) - g(static_cast<double>(l - 1) / K);
        w[l] = dg * dg;
    }
    std::vector<double> out(m - K + 1);
    for (std::size_t k = 1; k <= m - K + 1; ++k) {
        double s = 0.0;
        // (Y_{k+l-1} - Y_{k+l-2}) = d[k+l-2]
        for (int l = 1; l <= K; ++l) s += w[l] * d[k + l - 2] * d[k + l - 2];
        out[k - 1] = s;
    }
    return out;
}

double ctau_from_data(const std::vector<double>& v, double multiplier, std::size_t m, double exponent) {
    if (v.size() < 2) throw std::invalid_argument("ctau_from_data: need at least 2 pre-averaged values");
    if (!(multiplier > 0.0)) throw std::invalid_argument("ctau_from_data: multiplier must be positive");
    return multiplier * std::pow(static_cast<double>(m), exponent) * std::sqrt(sample_variance(v));
}

PrvResult prv(const MarketDay& day, const PrvConfig& cfg, double ctau) {
    PrvResult r;
    r.day_index = day.day_index;
    const std::size_t m = day.increments();
    r.m = static_cast<int>(m);
    const int K = cfg.bandwidth(m);
    const Weight& g = weight_or_default(cfg.g);
    const double ps = psi(cfg.g);
    const std::vector<double> ybar = preaverage(day.tick_logprices, K, g);
    const std::vector<double> yhat = noise_correction(day.tick_logprices, K, g);
    const double tau = cfg.truncate ? ctau * std::pow(static_cast<double>(m), -cfg.trunc_exponent)
                                    : std::numeric_limits<double>::infinity();
    double s = 0.0;
    for (std::size_t k = 0; k < ybar.size(); ++k) {
        if (std::abs(ybar[k]) <= tau) {
            s += ybar[k] * ybar[k] - 0.5 * yhat[k];
        } else {
            ++r.truncated;
        }
    }
    r.windows = static_cast<int>(ybar.size());
    r.rv = s / (ps * K);
    if (r.rv < cfg.floor) {
        // An all-flat day is exactly zero, not a floored negative.
        if (r.rv < 0.0 || r.rv > 0.0) r.floored = true;
        r.rv = r.rv == 0.0 ? 0.0 : cfg.floor;
    }
    return r;
}

namespace {

// m^e * Ybar for one day, appended to acc.
void scaled_preaverages(const MarketDay& day, const PrvConfig& cfg, std::vector<double>& acc) {
    const std::size_t m = day.increments();
    const int K = cfg.bandwidth(m);
    const double scale = std::pow(static_cast<double>(m), cfg.ctau_scale_exponent);
    for (double v : preaverage(day.tick_logprices, K, cfg.g)) acc.push_back(scale * v);
}

}  // namespace

double pooled_ctau(const DaySeries& days, const PrvConfig& cfg) {
    if (cfg.ctau) return *cfg.ctau;
    std::vector<double> all;
    for (const auto& d : days.days) scaled_preaverages(d, cfg, all);
    if (all.size() < 2) throw std::invalid_argument("pooled_ctau: need at least 2 pre-averaged values");
    return cfg.ctau_multiplier * std::sqrt(sample_variance(all));
}

std::vector<PrvResult> prv_series(const DaySeries& days, const PrvConfig& cfg) {
    std::vector<PrvResult> out;
    out.reserve(days.days.size());
    const bool need_pooled = cfg.truncate && !cfg.ctau && !cfg.per_day_ctau;
    const double pooled = need_pooled ? pooled_ctau(days, cfg) : (cfg.ctau ? *cfg.ctau : 0.0);
    for (const auto& d : days.days) {
        double c = pooled;
        if (cfg.truncate && !cfg.ctau && cfg.per_day_ctau) {
            std::vector<double> v;
            scaled_preaverages(d, cfg, v);
            c = cfg.ctau_multiplier * std::sqrt(sample_variance(v));
        }
        out.push_back(prv(d, cfg, c));
    }
    return out;
}

std::vector<double> values(const std::vector<PrvResult>& r) {
    std::vector<double> v(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) v[i] = r[i].rv;
    return v;
}

}  // namespace ogi::prv
