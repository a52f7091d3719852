#include "ogi/simulator.hpp"

#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ogi::sim {

int SimConfig::session_steps() const {
    const double s = session.lambda * m_all;
    const double r = std::round(s);
    if (std::abs(s - r) > 1e-6) throw std::invalid_argument("lambda * m_all must be an integer number of grid steps");
    return static_cast<int>(r);
}

void SimConfig::check() const {
    if (!(session.lambda > 0.0 && session.lambda < 1.0)) throw std::invalid_argument("lambda must lie in (0,1)");
    if (n_days < 1) throw std::invalid_argument("n_days must be >= 1");
    if (burn_in_days < 0) throw std::invalid_argument("burn_in_days must be >= 0");
    if (m_all < 2) throw std::invalid_argument("m_all must be >= 2");
    const int ms = session_steps();
    if (ms < 1 || ms >= m_all) throw std::invalid_argument("session must cover between 1 and m_all-1 grid steps");
    if (m_obs < 1 || m_obs > ms) throw std::invalid_argument("m_obs must lie in [1, lambda*m_all]");
    if (ms % m_obs != 0) throw std::invalid_argument("m_obs must divide the number of session grid steps");
    if (!(jump.jump_size >= 0.0) || !(jump.intensity_per_session >= 0.0))
        throw std::invalid_argument("jump size and intensity must be nonnegative");
    if (!(noise.rel_scale >= 0.0)) throw std::invalid_argument("noise scale must be nonnegative");
    const auto report = validate_for_simulation(theta);
    if (!report.ok()) throw std::invalid_argument("invalid theta: " + report.to_string());
    if (initial_sigma2 && !(*initial_sigma2 >= 0.0)) throw std::invalid_argument("initial_sigma2 must be >= 0");
}

std::vector<double> SimOutput::kept(const std::vector<double>& v) const {
    return std::vector<double>(v.begin() + burn_in, v.end());
}

double transition_open(double sigma2_open_prev, double session_iv, double overnight_ret_sq, const FullTheta& t,
                       double lambda) {
    return t.omega_L + t.gamma_L * (t.omega_H1 - t.omega_H2) + t.gamma() * sigma2_open_prev +
           t.gamma_L * t.alpha_H / lambda * session_iv + t.beta_L / (1.0 - lambda) * overnight_ret_sq;
}

double transition_close(double sigma2_close_prev, double session_iv, double overnight_ret_sq_prev, const FullTheta& t,
                        double lambda) {
    return t.omega_H1 - t.omega_H2 + t.gamma_H * t.omega_L + t.gamma() * sigma2_close_prev +
           t.alpha_H / lambda * session_iv + t.gamma_H * t.beta_L / (1.0 - lambda) * overnight_ret_sq_prev;
}

namespace {

std::mt19937_64 stream(std::uint64_t seed, std::uint32_t id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), id};
    return std::mt19937_64(seq);
}

[[noreturn]] void bad_state(int day, int step, double value) {
    std::ostringstream os;
    os << "spot variance is not finite (" << value << ") at day " << day << ", grid step " << step;
    throw NumericalError(os.str());
}

}  // namespace

SimOutput simulate(const SimConfig& cfg) {
    cfg.check();
    const FullTheta& th = cfg.theta;
    const double lambda = cfg.session.lambda;
    const int ms = cfg.session_steps();
    const int mo = cfg.m_all - ms;
    const double dt = 1.0 / cfg.m_all;
    const double sqdt = std::sqrt(dt);
    const double gamma = th.gamma();
    const int total_days = cfg.burn_in_days + cfg.n_days;
    const int stride = ms / cfg.m_obs;
    const bool vol_noise = th.nu_H > 0.0 || th.nu_L > 0.0;

    auto rng_B = stream(cfg.seed, 1);
    auto rng_W = stream(cfg.seed, 2);
    auto rng_J = stream(cfg.seed, 3);
    boost::random::normal_distribution<double> normal;
    boost::random::uniform_01<double> unif;
    boost::random::poisson_distribution<int> poisson(std::max(cfg.jump.intensity_per_session, 1e-300));
    const bool jumps_on = cfg.jump.intensity_per_session > 0.0 && cfg.jump.jump_size > 0.0;

    SimOutput out;
    out.config = cfg;
    out.burn_in = cfg.burn_in_days;
    DayTruth& tr = out.truth;
    for (auto* v : {&tr.iv_H, &tr.iv_L, &tr.ov, &tr.open_sigma2, &tr.close_sigma2, &tr.jump_var, &tr.session_return,
                    &tr.overnight_return})
        v->reserve(total_days);
    tr.jump_count.reserve(total_days);
    out.session_prices.reserve(cfg.n_days);
    if (cfg.store_grid) {
        out.grid_logprice.reserve(static_cast<std::size_t>(cfg.n_days) * cfg.m_all + 1);
        out.grid_sigma2.reserve(static_cast<std::size_t>(cfg.n_days) * cfg.m_all + 1);
    }

    double sigma2_open = cfg.initial_sigma2 ? *cfg.initial_sigma2
                                            : (th.omega_L + th.gamma_L * (th.omega_H1 - th.omega_H2)) / (1.0 - gamma);
    double S_H = 0.0, S_L = 0.0;
    double X = 0.0;
    std::vector<int> jump_steps;
    std::vector<double> jump_sizes, jump_times;

    const double cH_beta = th.beta_H / (1.0 - lambda);
    const double cH_alpha = th.alpha_H / lambda;
    const double cH_nu = th.nu_H / lambda;
    const double cL_alpha = th.alpha_L / lambda;
    const double cL_beta = th.beta_L / (1.0 - lambda);
    const double cL_nu = th.nu_L / (1.0 - lambda);

    for (int day = 0; day < total_days; ++day) {
        const bool keep = day >= cfg.burn_in_days;
        const int kept_index = day - cfg.burn_in_days + 1;  // 1-based day_index for kept days

        // Jumps for this session, mapped to the grid increment that contains them.
        jump_steps.clear();
        jump_sizes.clear();
        jump_times.clear();
        if (jumps_on) {
            const int count = poisson(rng_J);
            for (int k = 0; k < count; ++k) {
                const double u = unif(rng_J);
                const double sign = unif(rng_J) < 0.5 ? -1.0 : 1.0;
                jump_steps.push_back(std::min(static_cast<int>(u * ms), ms - 1));
                jump_sizes.push_back(sign * cfg.jump.jump_size);
                jump_times.push_back(u);
            }
        }
        double jump_var = 0.0;
        for (double j : jump_sizes) jump_var += j * j;

        // Session.
        const double s0 = sigma2_open;
        const double open_price = X;
        double I = 0.0, ZH = 0.0;
        std::vector<double> prices;
        if (keep) prices.reserve(cfg.m_obs + 1);
        for (int j = 0; j < ms; ++j) {
            const double u = static_cast<double>(j) / ms;
            const double s2 = s0 + u * u * (th.omega_H1 + th.gamma_H * s0) - u * (th.omega_H2 + s0) +
                              cH_beta * u * (1.0 - u) * S_H + cH_alpha * I + cH_nu * (1.0 - u) * ZH * ZH;
            if (!std::isfinite(s2)) bad_state(day + 1 - cfg.burn_in_days, j, s2);
            if (keep) {
                if (j % stride == 0) prices.push_back(X);
                if (cfg.store_grid) {
                    out.grid_logprice.push_back(X);
                    out.grid_sigma2.push_back(s2);
                }
            }
            double vol = 0.0;
            if (s2 > 0.0) {
                vol = std::sqrt(s2);
            } else if (s2 < 0.0) {
                ++out.clamped_steps;
            }
            X += vol * sqdt * normal(rng_B);
            for (std::size_t k = 0; k < jump_steps.size(); ++k)
                if (jump_steps[k] == j) X += jump_sizes[k];
            I += s2 * dt;
            if (vol_noise) ZH += sqdt * normal(rng_W);
        }
        const double sigma2_close = s0 + (th.omega_H1 + th.gamma_H * s0) - (th.omega_H2 + s0) + cH_alpha * I;
        if (!std::isfinite(sigma2_close)) bad_state(day + 1 - cfg.burn_in_days, ms, sigma2_close);
        const double close_price = X;
        if (keep) prices.push_back(X);
        const double iv_H = I;
        S_L = gamma * S_L + iv_H;

        // Overnight: no jumps, continuous part only.
        double P = 0.0, IL = 0.0, ZL = 0.0;
        for (int k = 0; k < mo; ++k) {
            const double v = static_cast<double>(k) / mo;
            const double s2 = sigma2_close + v * (th.omega_L + (th.gamma_L - 1.0) * sigma2_close) +
                              cL_alpha * v * (1.0 - v) * S_L + cL_beta * P * P + cL_nu * (1.0 - v) * ZL * ZL;
            if (!std::isfinite(s2)) bad_state(day + 1 - cfg.burn_in_days, ms + k, s2);
            if (keep && cfg.store_grid) {
                out.grid_logprice.push_back(X + P);
                out.grid_sigma2.push_back(s2);
            }
            double vol = 0.0;
            if (s2 > 0.0) {
                vol = std::sqrt(s2);
            } else if (s2 < 0.0) {
                ++out.clamped_steps;
            }
            P += vol * sqdt * normal(rng_B);
            IL += s2 * dt;
            if (vol_noise) ZL += sqdt * normal(rng_W);
        }
        const double ov = P * P;
        const double next_open = sigma2_close + th.omega_L + (th.gamma_L - 1.0) * sigma2_close + cL_beta * ov;
        if (!std::isfinite(next_open)) bad_state(day + 2 - cfg.burn_in_days, 0, next_open);
        X += P;
        S_H = gamma * S_H + ov;

        tr.iv_H.push_back(iv_H);
        tr.iv_L.push_back(IL);
        tr.ov.push_back(ov);
        tr.open_sigma2.push_back(s0);
        tr.close_sigma2.push_back(sigma2_close);
        tr.jump_var.push_back(jump_var);
        tr.jump_count.push_back(static_cast<int>(jump_sizes.size()));
        tr.session_return.push_back(close_price - open_price);
        tr.overnight_return.push_back(P);

        if (keep) {
            out.session_prices.push_back(std::move(prices));
            out.open_logprice.push_back(open_price);
            out.close_logprice.push_back(close_price);
            for (std::size_t k = 0; k < jump_sizes.size(); ++k)
                out.jumps.push_back({kept_index - 1 + jump_times[k] * lambda, jump_sizes[k]});
        }
        sigma2_open = next_open;
    }
    if (cfg.store_grid) {
        out.grid_logprice.push_back(X);
        out.grid_sigma2.push_back(sigma2_open);
    }
    std::sort(out.jumps.begin(), out.jumps.end(), [](const Jump& a, const Jump& b) { return a.time < b.time; });
    return out;
}

DaySeries make_observations(const SimOutput& sim, const NoiseConfig& noise, int m_obs, std::uint64_t seed) {
    const int stored = sim.config.m_obs;
    if (m_obs < 1 || m_obs > stored)
        throw std::invalid_argument("make_observations: m_obs exceeds the stored price resolution");
    if (stored % m_obs != 0) throw std::invalid_argument("make_observations: m_obs must divide the stored resolution");
    if (!(noise.rel_scale >= 0.0)) throw std::invalid_argument("make_observations: negative noise scale");
    const int stride = stored / m_obs;
    const double lambda = sim.config.session.lambda;
    auto rng = stream(seed, 4);
    boost::random::normal_distribution<double> normal;

    DaySeries out;
    out.days.reserve(sim.session_prices.size());
    for (std::size_t k = 0; k < sim.session_prices.size(); ++k) {
        const auto& p = sim.session_prices[k];
        const std::size_t g = k + static_cast<std::size_t>(sim.burn_in);
        const double sd = noise.rel_scale * std::sqrt(sim.truth.iv_H[g] + sim.truth.iv_L[g]);
        MarketDay day;
        day.day_index = static_cast<int>(k) + 1;
        day.tick_times.resize(m_obs + 1);
        day.tick_logprices.resize(m_obs + 1);
        for (int i = 0; i <= m_obs; ++i) {
            day.tick_times[i] = static_cast<double>(k) + lambda * static_cast<double>(i) / m_obs;
            double y = p[static_cast<std::size_t>(i) * stride];
            if (i > 0 && i < m_obs && sd > 0.0) y += sd * normal(rng);
            day.tick_logprices[i] = y;
        }
        day.tick_times.back() = static_cast<double>(k) + lambda;
        day.open_logprice = sim.open_logprice[k];
        day.close_logprice = sim.close_logprice[k];
        out.days.push_back(std::move(day));
    }
    return out;
}

}  // namespace ogi::sim
