#pragma once

#include "ogi/filters.hpp"
#include "ogi/models.hpp"
#include "ogi/simulator.hpp"

namespace ogi::testing {

// Filter input built from a simulated path with the true session IV in place
// of RV. m_all = 4320 keeps the grid cheap while staying well resolved.
inline filters::FilterInput true_vol_input(int n_days, std::uint64_t seed, int m_all = 4320) {
    sim::SimConfig c;
    c.n_days = n_days;
    c.m_all = m_all;
    c.m_obs = 390;
    c.seed = seed;
    c.jump.intensity_per_session = 0.0;
    const sim::SimOutput s = sim::simulate(c);
    filters::FilterInput in;
    in.lambda = c.session.lambda;
    in.rv = s.kept(s.truth.iv_H);
    in.ov = s.kept(s.truth.ov);
    return in;
}

// Daily data from a simulated path with the true session IV as RV.
inline models::DailyData true_vol_daily(int n_days, std::uint64_t seed, int m_all = 4320) {
    sim::SimConfig c;
    c.n_days = n_days;
    c.m_all = m_all;
    c.m_obs = 390;
    c.seed = seed;
    c.jump.intensity_per_session = 0.0;
    const sim::SimOutput s = sim::simulate(c);
    return models::DailyData::from_prices(s.open_logprice, s.close_logprice, s.kept(s.truth.iv_H), c.session.lambda);
}

}  // namespace ogi::testing
