#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ogi/core.hpp"

namespace ogi::sim {

struct JumpConfig {
    double jump_size = 0.05;
    double intensity_per_session = 10.0;
};

struct NoiseConfig {
    double rel_scale = 0.01;  // noise sd = rel_scale * sqrt(daily integrated variance)
};

struct SimConfig {
    FullTheta theta = FullTheta::reference();
    SessionSpec session;
    int n_days = 1;
    int m_all = 43200;
    int m_obs = 390;  // resolution at which true session prices are kept
    JumpConfig jump;
    NoiseConfig noise;
    int burn_in_days = 50;
    std::uint64_t seed = 1;
    std::optional<double> initial_sigma2;  // default: constants-only fixed point
    bool store_grid = false;               // keep the full-resolution path (memory heavy)

    /// Session steps per day, lambda * m_all; throws unless it is an integer.
    int session_steps() const;
    void check() const;
};

/// Per-day quantities of the latent path. Index 0 is the first burn-in day.
struct DayTruth {
    std::vector<double> iv_H;          // integral of sigma^2 over the session
    std::vector<double> iv_L;          // integral over the following overnight
    std::vector<double> ov;            // squared close-to-next-open return
    std::vector<double> open_sigma2;   // sigma^2 at the session open
    std::vector<double> close_sigma2;  // sigma^2 at the session close
    std::vector<double> jump_var;      // sum of squared jumps in the session
    std::vector<int> jump_count;
    std::vector<double> session_return;    // close - open (including jumps)
    std::vector<double> overnight_return;  // next open - close

    std::size_t size() const { return iv_H.size(); }
};

struct Jump {
    double time;
    double size;
};

struct SimOutput {
    SimConfig config;
    DayTruth truth;  // burn-in days followed by the n_days kept days
    int burn_in = 0;
    // Kept days only: true session log-prices at m_obs + 1 equally spaced points.
    std::vector<std::vector<double>> session_prices;
    std::vector<double> open_logprice;   // kept days
    std::vector<double> close_logprice;  // kept days
    std::vector<Jump> jumps;             // kept days
    // Full-resolution path of the kept days when store_grid is set.
    std::vector<double> grid_logprice;
    std::vector<double> grid_sigma2;
    int clamped_steps = 0;  // grid points where sigma^2 < 0 was floored at 0 for the diffusion

    /// Truth for the kept days, i.e. truth entries burn_in..end.
    std::vector<double> kept(const std::vector<double>& v) const;
};

SimOutput simulate(const SimConfig& config);

/// sigma^2 at the next open from the previous open, the session IV and the
/// overnight squared return.
double transition_open(double sigma2_open_prev, double session_iv, double overnight_ret_sq, const FullTheta& theta,
                       double lambda);

/// sigma^2 at the close from the previous close, the session IV and the
/// overnight squared return that precedes the session.
double transition_close(double sigma2_close_prev, double session_iv, double overnight_ret_sq_prev,
                        const FullTheta& theta, double lambda);

/// Noisy observed ticks at m_obs per session, subsampled from the stored
/// prices. Interior ticks receive N(0, (rel_scale)^2 (IV^H + IV^L)) noise.
DaySeries make_observations(const SimOutput& sim, const NoiseConfig& noise, int m_obs, std::uint64_t seed);

}  // namespace ogi::sim
