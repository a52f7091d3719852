#include "ogi/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ogi {

FullTheta FullTheta::reference() {
    FullTheta t;
    t.omega_H1 = 0.02;
    t.omega_H2 = 0.01;
    t.omega_L = 0.01;
    t.gamma_H = 0.6;
    t.gamma_L = 0.6;
    t.alpha_H = 0.4;
    t.alpha_L = 0.1;
    t.beta_H = 0.2;
    t.beta_L = 0.1;
    t.nu_H = 0.4;
    t.nu_L = 0.2;
    return t;
}

const std::array<const char*, GarchTheta::kSize>& GarchTheta::names() {
    static const std::array<const char*, kSize> n{"omega_Hg", "omega_Lg", "gamma", "alpha_Hg",
                                                   "alpha_Lg", "beta_Hg",  "beta_Lg"};
    return n;
}

std::array<double, GarchTheta::kSize> GarchTheta::to_array() const {
    return {omega_Hg, omega_Lg, gamma, alpha_Hg, alpha_Lg, beta_Hg, beta_Lg};
}

GarchTheta GarchTheta::from_array(const std::array<double, kSize>& v) {
    return GarchTheta{v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
}

std::string ValidationReport::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i) os << "; ";
        os << violations[i];
    }
    return os.str();
}

namespace {

void require_open_unit(ValidationReport& r, const char* name, double v) {
    if (!(v > 0.0 && v < 1.0)) r.violations.push_back(std::string(name) + " \xE2\x88\x89 (0,1)");
}

void require_finite(ValidationReport& r, const FullTheta& t) {
    const std::array<std::pair<const char*, double>, 11> all{{{"omega_H1", t.omega_H1},
                                                              {"omega_H2", t.omega_H2},
                                                              {"omega_L", t.omega_L},
                                                              {"gamma_H", t.gamma_H},
                                                              {"gamma_L", t.gamma_L},
                                                              {"alpha_H", t.alpha_H},
                                                              {"alpha_L", t.alpha_L},
                                                              {"beta_H", t.beta_H},
                                                              {"beta_L", t.beta_L},
                                                              {"nu_H", t.nu_H},
                                                              {"nu_L", t.nu_L}}};
    for (const auto& [name, v] : all)
        if (!std::isfinite(v)) r.violations.push_back(std::string(name) + " is not finite");
}

}  // namespace

ValidationReport validate_full_theta(const FullTheta& t) {
    ValidationReport r;
    require_finite(r, t);
    require_open_unit(r, "alpha_H", t.alpha_H);
    require_open_unit(r, "beta_L", t.beta_L);
    if (!(t.gamma_H > 0.0)) r.violations.push_back("gamma_H <= 0");
    if (!(t.gamma_L > 0.0)) r.violations.push_back("gamma_L <= 0");
    if (!(t.gamma_H * t.gamma_L < 1.0)) r.violations.push_back("gamma_H*gamma_L >= 1");
    if (t.nu_H < 0.0) r.violations.push_back("nu_H < 0");
    if (t.nu_L < 0.0) r.violations.push_back("nu_L < 0");
    return r;
}

ValidationReport validate_for_simulation(const FullTheta& t) {
    ValidationReport r;
    require_finite(r, t);
    const std::array<std::pair<const char*, double>, 8> nonneg{{{"gamma_H", t.gamma_H},
                                                                {"gamma_L", t.gamma_L},
                                                                {"alpha_H", t.alpha_H},
                                                                {"alpha_L", t.alpha_L},
                                                                {"beta_H", t.beta_H},
                                                                {"beta_L", t.beta_L},
                                                                {"nu_H", t.nu_H},
                                                                {"nu_L", t.nu_L}}};
    for (const auto& [name, v] : nonneg)
        if (v < 0.0) r.violations.push_back(std::string(name) + " < 0");
    if (!(t.gamma_H * t.gamma_L < 1.0)) r.violations.push_back("gamma_H*gamma_L >= 1");
    return r;
}

ValidationReport validate_garch_theta(const GarchTheta& g, double lambda, const ParamBox& box,
                                      StationarityMatrix which) {
    ValidationReport r;
    auto in = [&](const char* name, double v, double lo, double hi) {
        if (!(v > lo && v < hi)) {
            std::ostringstream os;
            os << name << " = " << v << " outside (" << lo << ", " << hi << ")";
            r.violations.push_back(os.str());
        }
    };
    in("omega_Hg", g.omega_Hg, box.omega_lo, box.omega_hi);
    in("omega_Lg", g.omega_Lg, box.omega_lo, box.omega_hi);
    in("gamma", g.gamma, box.gamma_lo, box.gamma_hi);
    in("alpha_Hg", g.alpha_Hg, box.alpha_lo, box.alpha_hi);
    in("alpha_Lg", g.alpha_Lg, box.alpha_lo, box.alpha_hi);
    in("beta_Hg", g.beta_Hg, box.beta_lo, box.beta_hi);
    in("beta_Lg", g.beta_Lg, box.beta_lo, box.beta_hi);
    const Matrix2 m = which == StationarityMatrix::MeanRecursion ? mean_recursion_matrix(g)
                                                                 : printed_stationarity_matrix(g, lambda);
    const double norm = spectral_norm_2x2(m);
    if (!(norm < 1.0)) {
        std::ostringstream os;
        os << "spectral norm " << norm << " >= 1";
        r.violations.push_back(os.str());
    }
    return r;
}

double spectral_norm_2x2(const Matrix2& m) {
    // Singular values of [[a,b],[c,d]]: sqrt((s +- sqrt(s^2 - 4 det^2)) / 2)
    // with s = a^2+b^2+c^2+d^2. Written in the cancellation-free form
    // sigma_max = (sqrt((a+d)^2+(b-c)^2) + sqrt((a-d)^2+(b+c)^2)) / 2.
    const double a = m[0][0], b = m[0][1], c = m[1][0], d = m[1][1];
    return 0.5 * (std::hypot(a + d, b - c) + std::hypot(a - d, b + c));
}

Matrix2 mean_recursion_matrix(const GarchTheta& g) {
    return {{{g.gamma + g.alpha_Hg, g.beta_Hg}, {g.alpha_Lg, g.gamma + g.beta_Lg}}};
}

Matrix2 printed_stationarity_matrix(const GarchTheta& g, double lambda) {
    return {{{g.gamma + g.alpha_Hg / lambda, g.beta_Hg / (1.0 - lambda)},
             {g.alpha_Lg / lambda, g.gamma + g.beta_Lg / (1.0 - lambda)}}};
}

void check_market_day(const MarketDay& day, double lambda) {
    const auto fail = [&](const std::string& what) {
        throw std::invalid_argument("day " + std::to_string(day.day_index) + ": " + what);
    };
    if (day.day_index < 1) fail("day_index < 1");
    if (day.tick_times.size() != day.tick_logprices.size()) fail("tick_times and tick_logprices differ in length");
    if (day.tick_times.size() < 2) fail("fewer than 2 ticks");
    for (std::size_t i = 1; i < day.tick_times.size(); ++i)
        if (!(day.tick_times[i] > day.tick_times[i - 1])) fail("tick times not strictly increasing");
    const double open = session_open_time(day.day_index);
    const double close = session_close_time(day.day_index, lambda);
    constexpr double tol = 1e-9;
    if (std::abs(day.tick_times.front() - open) > tol) fail("first tick is not at the session open");
    if (std::abs(day.tick_times.back() - close) > tol) fail("last tick is not at the session close");
}

void DaySeries::check(double lambda) const {
    for (std::size_t i = 0; i < days.size(); ++i) {
        check_market_day(days[i], lambda);
        if (i > 0 && days[i].day_index != days[i - 1].day_index + 1)
            throw std::invalid_argument("day_index not consecutive at day " + std::to_string(days[i].day_index));
    }
}

std::vector<double> DaySeries::overnight_returns() const {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < days.size(); ++i)
        out.push_back(days[i + 1].open_logprice - days[i].close_logprice);
    return out;
}

std::vector<double> DaySeries::overnight_return_sq() const {
    auto r = overnight_returns();
    for (auto& v : r) v *= v;
    return r;
}

std::vector<double> DaySeries::intraday_returns() const {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < days.size(); ++i) out.push_back(days[i].close_logprice - days[i].open_logprice);
    return out;
}

std::vector<double> DaySeries::intraday_return_sq() const {
    auto r = intraday_returns();
    for (auto& v : r) v *= v;
    return r;
}

std::vector<double> DaySeries::open_to_open_returns() const {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < days.size(); ++i) out.push_back(days[i + 1].open_logprice - days[i].open_logprice);
    return out;
}

double sample_mean(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("sample_mean: empty input");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_variance(const std::vector<double>& x) {
    if (x.size() < 2) throw std::invalid_argument("sample_variance: fewer than 2 values");
    const double m = sample_mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

}  // namespace ogi
