#include "ogi/io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>

namespace ogi::io {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

double parse_double(std::string_view s, const std::string& what) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    if (b != e && *b == '+') ++b;
    const auto r = std::from_chars(b, e, v);
    if (r.ec != std::errc() || r.ptr != e || s.empty())
        throw IoError(what + ": '" + std::string(s) + "' is not a number");
    return v;
}

namespace {

long long parse_int(std::string_view s, const std::string& what) {
    long long v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size() || s.empty())
        throw IoError(what + ": '" + std::string(s) + "' is not an integer");
    return v;
}

bool parse_bool(const std::string& s, const std::string& what) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw IoError(what + ": '" + s + "' is not a boolean (true/false)");
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t p = line.find(sep, start);
        out.push_back(line.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
        if (p == std::string_view::npos) break;
        start = p + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::string where(const std::string& source, std::size_t line) {
    return source + ":" + std::to_string(line);
}

int day_from(double v, const std::string& what) {
    if (!(v == std::floor(v)) || std::abs(v) > 1e9) throw IoError(what + ": day_index must be an integer");
    return static_cast<int>(v);
}

void expect_header(const Table& t, const std::vector<std::string>& want, const std::string& source) {
    if (t.header != want) {
        std::string w;
        for (const auto& h : want) w += (w.empty() ? "" : ",") + h;
        throw IoError(source + ":1: expected header '" + w + "'");
    }
}

}  // namespace

// ---- tables ---------------------------------------------------------------

std::size_t Table::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw IoError("missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

std::vector<double> Table::values(const std::string& name) const {
    const std::size_t c = column(name);
    std::vector<double> v(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) v[i] = rows[i][c];
    return v;
}

void write_table(std::ostream& os, const Table& t) {
    for (std::size_t j = 0; j < t.header.size(); ++j) os << (j ? "," : "") << t.header[j];
    os << '\n';
    for (const auto& r : t.rows) {
        if (r.size() != t.header.size()) throw IoError("write_table: row width differs from header");
        for (std::size_t j = 0; j < r.size(); ++j) os << (j ? "," : "") << format_double(r[j]);
        os << '\n';
    }
    if (!os) throw IoError("write_table: stream error");
}

Table read_table(std::istream& is, const std::string& source) {
    Table t;
    std::string line;
    std::size_t n = 0;
    if (!std::getline(is, line)) throw IoError(source + ": empty file, expected a header");
    ++n;
    for (auto f : split(trim(line), ',')) t.header.emplace_back(trim(f));
    while (std::getline(is, line)) {
        ++n;
        const std::string_view l = trim(line);
        if (l.empty()) continue;
        const auto fields = split(l, ',');
        if (fields.size() != t.header.size())
            throw IoError(where(source, n) + ": expected " + std::to_string(t.header.size()) + " fields, got " +
                          std::to_string(fields.size()));
        std::vector<double> row(fields.size());
        for (std::size_t j = 0; j < fields.size(); ++j)
            row[j] = parse_double(trim(fields[j]), where(source, n) + " column " + t.header[j]);
        t.rows.push_back(std::move(row));
    }
    return t;
}

void write_highfreq(std::ostream& os, const DaySeries& days) {
    os << "day_index,time,log_price\n";
    for (const auto& d : days.days) {
        if (d.tick_times.size() != d.tick_logprices.size())
            throw IoError("write_highfreq: tick times and prices differ in length");
        for (std::size_t i = 0; i < d.tick_times.size(); ++i)
            os << d.day_index << ',' << format_double(d.tick_times[i]) << ',' << format_double(d.tick_logprices[i])
               << '\n';
    }
    if (!os) throw IoError("write_highfreq: stream error");
}

DaySeries read_highfreq(std::istream& is, double lambda, const std::string& source) {
    const Table t = read_table(is, source);
    expect_header(t, {"day_index", "time", "log_price"}, source);
    DaySeries out;
    constexpr double tol = 1e-9;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const std::string at = where(source, i + 2);
        const int day = day_from(t.rows[i][0], at);
        const double time = t.rows[i][1], price = t.rows[i][2];
        if (!std::isfinite(time) || !std::isfinite(price)) throw IoError(at + ": non-finite value");
        if (day < 1) throw IoError(at + ": day_index must be >= 1");
        if (time < session_open_time(day) - tol || time > session_close_time(day, lambda) + tol)
            throw IoError(at + ": time outside the session of day " + std::to_string(day));
        if (out.days.empty() || out.days.back().day_index != day) {
            if (!out.days.empty() && day != out.days.back().day_index + 1)
                throw IoError(at + ": day_index not consecutive");
            out.days.push_back(MarketDay{day, {}, {}, 0.0, 0.0});
        } else if (!(time > out.days.back().tick_times.back())) {
            throw IoError(at + ": times not strictly increasing within the day");
        }
        out.days.back().tick_times.push_back(time);
        out.days.back().tick_logprices.push_back(price);
    }
    for (auto& d : out.days) {
        if (d.tick_logprices.size() < 2)
            throw IoError(source + ": day " + std::to_string(d.day_index) + " has fewer than 2 ticks");
        d.open_logprice = d.tick_logprices.front();
        d.close_logprice = d.tick_logprices.back();
    }
    return out;
}

void write_daily(std::ostream& os, const std::vector<DailyRow>& rows) {
    os << "day_index,open_log_price,close_log_price\n";
    for (const auto& r : rows)
        os << r.day_index << ',' << format_double(r.open_log_price) << ',' << format_double(r.close_log_price) << '\n';
    if (!os) throw IoError("write_daily: stream error");
}

std::vector<DailyRow> read_daily(std::istream& is, const std::string& source) {
    const Table t = read_table(is, source);
    expect_header(t, {"day_index", "open_log_price", "close_log_price"}, source);
    std::vector<DailyRow> out;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const std::string at = where(source, i + 2);
        DailyRow r{day_from(t.rows[i][0], at), t.rows[i][1], t.rows[i][2]};
        if (!std::isfinite(r.open_log_price) || !std::isfinite(r.close_log_price))
            throw IoError(at + ": non-finite price");
        if (!out.empty() && r.day_index != out.back().day_index + 1) throw IoError(at + ": day_index not consecutive");
        out.push_back(r);
    }
    return out;
}

std::vector<DailyRow> daily_rows(const DaySeries& days) {
    std::vector<DailyRow> out;
    for (const auto& d : days.days) out.push_back({d.day_index, d.open_logprice, d.close_logprice});
    return out;
}

void write_rv(std::ostream& os, const std::vector<prv::PrvResult>& r) {
    os << "day_index,rv\n";
    for (const auto& x : r) os << x.day_index << ',' << format_double(x.rv) << '\n';
    if (!os) throw IoError("write_rv: stream error");
}

std::vector<RvRow> read_rv(std::istream& is, const std::string& source) {
    const Table t = read_table(is, source);
    expect_header(t, {"day_index", "rv"}, source);
    std::vector<RvRow> out;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const std::string at = where(source, i + 2);
        RvRow r{day_from(t.rows[i][0], at), t.rows[i][1]};
        if (!(r.rv >= 0.0) || !std::isfinite(r.rv)) throw IoError(at + ": rv must be finite and nonnegative");
        if (!out.empty() && r.day_index != out.back().day_index + 1) throw IoError(at + ": day_index not consecutive");
        out.push_back(r);
    }
    return out;
}

void write_truth(std::ostream& os, const sim::SimOutput& s) {
    const auto ivH = s.kept(s.truth.iv_H), ivL = s.kept(s.truth.iv_L), ov = s.kept(s.truth.ov),
               jv = s.kept(s.truth.jump_var);
    Table t;
    t.header = {"day_index", "iv_H", "iv_L", "iv", "ov", "jump_var"};
    for (std::size_t i = 0; i < ivH.size(); ++i)
        t.rows.push_back({static_cast<double>(i + 1), ivH[i], ivL[i], ivH[i] + ivL[i], ov[i], jv[i]});
    write_table(os, t);
}

models::DailyData join_daily(const std::vector<DailyRow>& daily, const std::vector<RvRow>& rv, double lambda) {
    std::vector<double> open, close, r;
    std::map<int, double> by_day;
    for (const auto& x : rv) by_day[x.day_index] = x.rv;
    for (const auto& d : daily) {
        open.push_back(d.open_log_price);
        close.push_back(d.close_log_price);
        if (rv.empty()) {
            r.push_back(0.0);
        } else {
            const auto it = by_day.find(d.day_index);
            if (it == by_day.end()) throw IoError("no RV for day " + std::to_string(d.day_index));
            r.push_back(it->second);
        }
    }
    return models::DailyData::from_prices(open, close, r, lambda);
}

// ---- files --------------------------------------------------------------

std::string read_text(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    if (!f) throw IoError("cannot open " + p.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_text(const fs::path& p, std::string_view text) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + p.string());
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    f.flush();
    if (!f) throw IoError("error writing " + p.string());
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

// ---- configuration --------------------------------------------------------

namespace {

struct Entry {
    const char* key;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

std::string fmt_list(const std::vector<double>& v) {
    std::string s;
    for (double x : v) s += (s.empty() ? "" : ",") + format_double(x);
    return s;
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
    std::vector<double> out;
    for (auto f : split(s, ',')) out.push_back(parse_double(trim(f), what));
    return out;
}

#define OGI_DOUBLE(KEY, FIELD)                                                                      \
    Entry {                                                                                         \
        KEY, [](RunConfig& c, const std::string& v) { c.FIELD = parse_double(v, KEY); },            \
            [](const RunConfig& c) { return format_double(c.FIELD); }                               \
    }
#define OGI_INT(KEY, FIELD, TYPE)                                                                            \
    Entry {                                                                                                  \
        KEY, [](RunConfig& c, const std::string& v) { c.FIELD = static_cast<TYPE>(parse_int(v, KEY)); },     \
            [](const RunConfig& c) { return std::to_string(c.FIELD); }                                       \
    }
#define OGI_BOOL(KEY, FIELD)                                                                  \
    Entry {                                                                                   \
        KEY, [](RunConfig& c, const std::string& v) { c.FIELD = parse_bool(v, KEY); },        \
            [](const RunConfig& c) { return std::string(c.FIELD ? "true" : "false"); }        \
    }

const std::vector<Entry>& entries() {
    static const std::vector<Entry> e = {
        OGI_DOUBLE("session.lambda", lambda),
        Entry{"prv.K",
              [](RunConfig& c, const std::string& v) {
                  if (v == "auto") c.prv.K.reset();
                  else c.prv.K = static_cast<int>(parse_int(v, "prv.K"));
              },
              [](const RunConfig& c) { return c.prv.K ? std::to_string(*c.prv.K) : std::string("auto"); }},
        OGI_DOUBLE("prv.ctau_multiplier", prv.ctau_multiplier),
        OGI_DOUBLE("prv.exponent", prv.trunc_exponent),
        OGI_DOUBLE("prv.ctau_scale_exponent", prv.ctau_scale_exponent),
        Entry{"prv.ctau",
              [](RunConfig& c, const std::string& v) {
                  if (v == "auto") c.prv.ctau.reset();
                  else c.prv.ctau = parse_double(v, "prv.ctau");
              },
              [](const RunConfig& c) { return c.prv.ctau ? format_double(*c.prv.ctau) : std::string("auto"); }},
        OGI_BOOL("prv.per_day_ctau", prv.per_day_ctau),
        OGI_BOOL("prv.truncate", prv.truncate),
        OGI_DOUBLE("prv.floor", prv.floor),
        Entry{"fit.model",
              [](RunConfig& c, const std::string& v) {
                  models::model_from_string(v);
                  c.fit_model = v;
              },
              [](const RunConfig& c) { return c.fit_model; }},
        OGI_DOUBLE("fit.omega_lo", estimation.box.omega_lo),
        OGI_DOUBLE("fit.omega_hi", estimation.box.omega_hi),
        OGI_DOUBLE("fit.gamma_lo", estimation.box.gamma_lo),
        OGI_DOUBLE("fit.gamma_hi", estimation.box.gamma_hi),
        OGI_DOUBLE("fit.alpha_lo", estimation.box.alpha_lo),
        OGI_DOUBLE("fit.alpha_hi", estimation.box.alpha_hi),
        OGI_DOUBLE("fit.beta_lo", estimation.box.beta_lo),
        OGI_DOUBLE("fit.beta_hi", estimation.box.beta_hi),
        OGI_INT("fit.max_evaluations", estimation.optimizer.max_evaluations, int),
        OGI_DOUBLE("fit.ftol", estimation.optimizer.ftol),
        OGI_DOUBLE("fit.xtol", estimation.optimizer.xtol),
        OGI_DOUBLE("fit.initial_step", estimation.optimizer.initial_step),
        OGI_INT("fit.starts", estimation.optimizer.starts, int),
        OGI_DOUBLE("fit.jitter", estimation.optimizer.jitter),
        OGI_INT("fit.seed", estimation.optimizer.seed, std::uint64_t),
        OGI_BOOL("fit.polish", estimation.optimizer.polish),
        Entry{"fit.convention",
              [](RunConfig& c, const std::string& v) {
                  c.estimation.convention = theory::aggregation_from_string(v);
              },
              [](const RunConfig& c) { return std::string(theory::to_string(c.estimation.convention)); }},
        Entry{"fit.stationarity",
              [](RunConfig& c, const std::string& v) {
                  if (v == "mean-recursion") c.estimation.stationarity = StationarityMatrix::MeanRecursion;
                  else if (v == "printed") c.estimation.stationarity = StationarityMatrix::Printed;
                  else throw IoError("fit.stationarity: expected mean-recursion or printed, got '" + v + "'");
              },
              [](const RunConfig& c) {
                  return std::string(c.estimation.stationarity == StationarityMatrix::MeanRecursion ? "mean-recursion"
                                                                                                  : "printed");
              }},
        OGI_INT("fit.min_days", estimation.min_days, std::size_t),
        OGI_INT("backtest.window", backtest.window, std::size_t),
        Entry{"backtest.q0", [](RunConfig& c, const std::string& v) { c.backtest.q0 = parse_list(v, "backtest.q0"); },
              [](const RunConfig& c) { return fmt_list(c.backtest.q0); }},
        Entry{"backtest.xi", [](RunConfig& c, const std::string& v) { c.backtest.xi = parse_list(v, "backtest.xi"); },
              [](const RunConfig& c) { return fmt_list(c.backtest.xi); }},
        OGI_INT("backtest.refit_stride", backtest.refit_stride, std::size_t),
        Entry{"backtest.baseline",
              [](RunConfig& c, const std::string& v) { c.backtest.baseline = models::model_from_string(v); },
              [](const RunConfig& c) { return models::to_string(c.backtest.baseline); }},
        OGI_INT("backtest.dq_lags", backtest.dq_lags, int),
        Entry{"backtest.dm_lag",
              [](RunConfig& c, const std::string& v) {
                  if (v == "auto") c.backtest.dm_lag.reset();
                  else c.backtest.dm_lag = static_cast<int>(parse_int(v, "backtest.dm_lag"));
              },
              [](const RunConfig& c) {
                  return c.backtest.dm_lag ? std::to_string(*c.backtest.dm_lag) : std::string("auto");
              }},
        OGI_INT("backtest.var_min_in_sample", backtest.var_min_in_sample, std::size_t),
        OGI_INT("sim.n_days", sim.n_days, int),
        OGI_INT("sim.m_all", sim.m_all, int),
        OGI_INT("sim.m_obs", sim.m_obs, int),
        OGI_INT("sim.burn_in_days", sim.burn_in_days, int),
        OGI_INT("sim.seed", sim.seed, std::uint64_t),
        OGI_DOUBLE("sim.jump_size", sim.jump.jump_size),
        OGI_DOUBLE("sim.jump_intensity", sim.jump.intensity_per_session),
        OGI_DOUBLE("sim.noise_rel_scale", sim.noise.rel_scale),
        Entry{"sim.initial_sigma2",
              [](RunConfig& c, const std::string& v) {
                  if (v == "auto") c.sim.initial_sigma2.reset();
                  else c.sim.initial_sigma2 = parse_double(v, "sim.initial_sigma2");
              },
              [](const RunConfig& c) {
                  return c.sim.initial_sigma2 ? format_double(*c.sim.initial_sigma2) : std::string("auto");
              }},
        OGI_BOOL("sim.store_grid", sim.store_grid),
        OGI_DOUBLE("sim.theta.omega_H1", sim.theta.omega_H1),
        OGI_DOUBLE("sim.theta.omega_H2", sim.theta.omega_H2),
        OGI_DOUBLE("sim.theta.omega_L", sim.theta.omega_L),
        OGI_DOUBLE("sim.theta.gamma_H", sim.theta.gamma_H),
        OGI_DOUBLE("sim.theta.gamma_L", sim.theta.gamma_L),
        OGI_DOUBLE("sim.theta.alpha_H", sim.theta.alpha_H),
        OGI_DOUBLE("sim.theta.alpha_L", sim.theta.alpha_L),
        OGI_DOUBLE("sim.theta.beta_H", sim.theta.beta_H),
        OGI_DOUBLE("sim.theta.beta_L", sim.theta.beta_L),
        OGI_DOUBLE("sim.theta.nu_H", sim.theta.nu_H),
        OGI_DOUBLE("sim.theta.nu_L", sim.theta.nu_L),
    };
    return e;
}

#undef OGI_DOUBLE
#undef OGI_INT
#undef OGI_BOOL

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
    for (const auto& e : entries()) {
        if (key == e.key) {
            try {
                e.set(*this, value);
            } catch (const IoError&) {
                throw;
            } catch (const std::exception& ex) {
                throw IoError(key + ": " + ex.what());
            }
            sim.session.lambda = lambda;
            return;
        }
    }
    throw IoError("unknown configuration key '" + key + "'");
}

RunConfig RunConfig::parse(std::istream& is, const std::string& source) {
    RunConfig c;
    std::string line;
    std::size_t n = 0;
    std::map<std::string, std::size_t> seen;
    while (std::getline(is, line)) {
        ++n;
        const std::string_view l = trim(line);
        if (l.empty() || l.front() == '#') continue;
        const std::size_t eq = l.find('=');
        if (eq == std::string_view::npos) throw IoError(where(source, n) + ": expected key = value");
        const std::string key(trim(l.substr(0, eq)));
        const std::string value(trim(l.substr(eq + 1)));
        if (seen.count(key))
            throw IoError(where(source, n) + ": key '" + key + "' repeats line " + std::to_string(seen[key]));
        seen[key] = n;
        try {
            c.set(key, value);
        } catch (const IoError& e) {
            throw IoError(where(source, n) + ": " + e.what());
        }
    }
    return c;
}

RunConfig RunConfig::load(const fs::path& p) {
    std::istringstream is(read_text(p));
    return parse(is, p.string());
}

std::string RunConfig::resolved() const {
    std::string s;
    for (const auto& e : entries()) s += std::string(e.key) + " = " + e.get(*this) + "\n";
    return s;
}

std::vector<std::string> RunConfig::keys() {
    std::vector<std::string> k;
    for (const auto& e : entries()) k.emplace_back(e.key);
    return k;
}

void RunConfig::set_seed(std::uint64_t seed) {
    sim.seed = seed;
    estimation.optimizer.seed = seed;
}

// ---- JSON -----------------------------------------------------------------

namespace {

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }
double from_num(const Json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

Json leg_json(const filters::LegParams& p) {
    Json j;
    j["omega"] = num(p.omega);
    j["gamma"] = num(p.gamma);
    j["alpha"] = num(p.alpha);
    j["beta"] = num(p.beta);
    return j;
}

filters::LegParams leg_from(const Json& j) {
    return {from_num(j.at("omega")), from_num(j.at("gamma")), from_num(j.at("alpha")), from_num(j.at("beta"))};
}

Json test_json(const eval::TestResult& t) {
    Json j;
    j["stat"] = num(t.stat);
    j["p_value"] = num(t.p_value);
    return j;
}

}  // namespace

Json to_json(const GarchTheta& g) {
    Json j;
    const auto a = g.to_array();
    for (std::size_t k = 0; k < GarchTheta::kSize; ++k) j[GarchTheta::names()[k]] = num(a[k]);
    return j;
}

Json to_json(const est::FitReport& r) {
    Json j;
    j["theta_g_hat"] = to_json(r.theta_g_hat);
    j["thetaH_hat"] = leg_json(r.thetaH_hat);
    j["thetaL_hat"] = leg_json(r.thetaL_hat);
    j["phi_H_hat"] = num(r.phi_H_hat);
    j["phi_L_hat"] = num(r.phi_L_hat);
    Json cov = Json::array();
    for (Eigen::Index i = 0; i < r.cov.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < r.cov.cols(); ++k) row.push_back(num(r.cov(i, k)));
        cov.push_back(row);
    }
    j["cov"] = cov;
    j["cov_pseudo_inverse"] = r.cov_pseudo_inverse;
    Json zs = Json::array();
    for (const auto& z : r.z_stats) {
        Json e;
        e["name"] = z.name;
        e["estimate"] = num(z.estimate);
        e["null_value"] = num(z.null_value);
        e["stat"] = num(z.stat);
        e["p_value"] = num(z.p_value);
        zs.push_back(e);
    }
    j["z_stats"] = zs;
    j["objective"] = num(r.objective);
    j["iterations"] = r.iterations;
    j["evaluations"] = r.evaluations;
    j["converged"] = r.converged;
    j["constraint_active"] = r.constraint_active;
    j["spectral_norm"] = num(r.spectral_norm);
    j["n"] = r.n;
    return j;
}

est::FitReport fit_report_from_json(const Json& j) {
    est::FitReport r;
    std::array<double, GarchTheta::kSize> a{};
    for (std::size_t k = 0; k < GarchTheta::kSize; ++k) a[k] = from_num(j.at("theta_g_hat").at(GarchTheta::names()[k]));
    r.theta_g_hat = GarchTheta::from_array(a);
    r.thetaH_hat = leg_from(j.at("thetaH_hat"));
    r.thetaL_hat = leg_from(j.at("thetaL_hat"));
    r.phi_H_hat = from_num(j.at("phi_H_hat"));
    r.phi_L_hat = from_num(j.at("phi_L_hat"));
    const auto& cov = j.at("cov");
    r.cov.resize(static_cast<Eigen::Index>(cov.size()), cov.empty() ? 0 : static_cast<Eigen::Index>(cov[0].size()));
    for (std::size_t i = 0; i < cov.size(); ++i)
        for (std::size_t k = 0; k < cov[i].size(); ++k)
            r.cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = from_num(cov[i][k]);
    r.cov_pseudo_inverse = j.at("cov_pseudo_inverse").get<bool>();
    for (const auto& e : j.at("z_stats"))
        r.z_stats.push_back({e.at("name").get<std::string>(), from_num(e.at("estimate")), from_num(e.at("null_value")),
                             from_num(e.at("stat")), from_num(e.at("p_value"))});
    r.objective = from_num(j.at("objective"));
    r.iterations = j.at("iterations").get<int>();
    r.evaluations = j.at("evaluations").get<int>();
    r.converged = j.at("converged").get<bool>();
    r.constraint_active = j.at("constraint_active").get<std::vector<bool>>();
    r.spectral_norm = from_num(j.at("spectral_norm"));
    r.n = j.at("n").get<std::size_t>();
    return r;
}

Json to_json(const models::ModelFit& f) {
    Json j;
    j["model"] = models::to_string(f.model);
    Json p;
    const auto names = models::param_names(f.model);
    for (std::size_t k = 0; k < names.size() && k < f.params.size(); ++k) p[names[k]] = num(f.params[k]);
    j["params"] = p;
    j["objective"] = num(f.objective);
    j["converged"] = f.converged;
    j["adjustment"] = num(f.adjustment);
    j["n"] = f.n;
    return j;
}

Json to_json(const eval::ModelReport& r) {
    Json j;
    j["model"] = r.model;
    j["return_convention"] = r.return_convention;
    j["mspe"] = num(r.mspe);
    j["qlike"] = num(r.qlike);
    Json dm;
    if (r.dm_mspe) dm["mspe"] = test_json(*r.dm_mspe);
    if (r.dm_qlike) dm["qlike"] = test_json(*r.dm_qlike);
    if (!r.dm_error.empty()) dm["error"] = r.dm_error;
    j["dm"] = dm.is_null() ? Json::object() : dm;
    Json cov = Json::array();
    for (const auto& [q, c] : r.coverage) {
        Json e;
        e["q0"] = q;
        if (c.error.empty()) {
            e["hit_rate"] = num(c.hit_rate);
            e["lruc"] = test_json(c.lruc);
            e["lrcc"] = test_json(c.lrcc);
            e["dq"] = test_json(c.dq);
            e["continuity_corrected"] = c.lruc.corrected;
        } else {
            e["error"] = c.error;
        }
        cov.push_back(e);
    }
    j["coverage"] = cov;
    Json ut = Json::array();
    for (const auto& [xi, u] : r.utility) {
        Json e;
        e["xi"] = xi;
        e["sharpe"] = num(u.sharpe);
        e["expected_utility"] = num(u.expected_utility);
        ut.push_back(e);
    }
    j["utility"] = ut;
    if (r.persistence) {
        Json p;
        p["a"] = num(r.persistence->a);
        p["b"] = num(r.persistence->b);
        p["first_lag"] = num(r.persistence->first_lag);
        p["max_abs"] = num(r.persistence->max_abs);
        p["exact_fit"] = r.persistence->exact_fit;
        Json acf = Json::array();
        for (double v : r.persistence->acf) acf.push_back(num(v));
        p["acf"] = acf;
        j["persistence"] = p;
    } else {
        j["persistence"] = Json{{"error", r.persistence_error}};
    }
    return j;
}

Json manifest(const std::string& command, std::uint64_t seed, const std::string& resolved_config, const fs::path& dir,
              const std::vector<std::string>& files) {
    Json j;
    j["command"] = command;
    j["seed"] = seed;
    j["config_hash"] = hex64(fnv1a64(resolved_config));
    Json fl = Json::array();
    for (const auto& name : files) {
        const std::string text = read_text(dir / name);
        Json e;
        e["name"] = name;
        e["bytes"] = text.size();
        e["fnv1a64"] = hex64(fnv1a64(text));
        fl.push_back(e);
    }
    j["files"] = fl;
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream ts;
    ts << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    j["created_utc"] = ts.str();
    return j;
}

// ---- backtest artifacts ---------------------------------------------------

namespace {

const std::string kPrefix = "forecasts_";

std::vector<std::string> forecast_header(const std::vector<double>& q0) {
    std::vector<std::string> h = {"day_index", "realized_total", "forecast", "forecast_return_scale", "return"};
    for (double q : q0) h.push_back("var_" + format_double(q));
    return h;
}

}  // namespace

void write_forecasts(const fs::path& dir, const eval::BacktestResult& r, const std::vector<int>& day_index) {
    for (const auto& f : r.forecasts) {
        Table t;
        std::vector<double> q0;
        for (const auto& [q, v] : f.var) q0.push_back(q);
        t.header = forecast_header(q0);
        if (day_index.size() != f.forecast.size()) throw IoError("write_forecasts: day index length mismatch");
        for (std::size_t i = 0; i < f.forecast.size(); ++i) {
            std::vector<double> row = {static_cast<double>(day_index[i]), r.realized_total[i], f.forecast[i],
                                       f.forecast_return_scale[i], f.returns[i]};
            for (const auto& [q, v] : f.var) row.push_back(v[i]);
            t.rows.push_back(std::move(row));
        }
        write_text(dir / (kPrefix + models::to_string(f.model) + ".csv"), to_text([&](std::ostream& os) {
                       write_table(os, t);
                   }));
    }
}

LoadedForecasts read_forecasts(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
    LoadedForecasts out;
    for (models::Model m : models::all_models()) {
        const fs::path p = dir / (kPrefix + models::to_string(m) + ".csv");
        if (!fs::exists(p)) continue;
        std::istringstream is(read_text(p));
        const Table t = read_table(is, p.string());
        if (t.header.size() < 5 || !std::equal(t.header.begin(), t.header.begin() + 5, forecast_header({}).begin()))
            throw IoError(p.string() + ":1: unexpected header");
        if (t.rows.empty()) throw IoError(p.string() + ": no forecast rows");
        eval::ModelForecasts f;
        f.model = m;
        f.forecast = t.values("forecast");
        f.forecast_return_scale = t.values("forecast_return_scale");
        f.returns = t.values("return");
        for (std::size_t c = 5; c < t.header.size(); ++c) {
            if (t.header[c].rfind("var_", 0) != 0) throw IoError(p.string() + ":1: unexpected column " + t.header[c]);
            const double q = parse_double(t.header[c].substr(4), p.string() + " header");
            f.var[q] = t.values(t.header[c]);
        }
        const auto realized = t.values("realized_total");
        std::vector<int> days;
        for (double d : t.values("day_index")) days.push_back(day_from(d, p.string()));
        if (out.forecasts.empty()) {
            out.realized_total = realized;
            out.day_index = days;
        } else if (realized != out.realized_total || days != out.day_index) {
            throw IoError(p.string() + ": days or realized values differ from the other models");
        }
        out.forecasts.push_back(std::move(f));
    }
    if (out.forecasts.empty()) throw IoError("no forecast tables (forecasts_<model>.csv) in " + dir.string());
    return out;
}

Summary summarize(const LoadedForecasts& f, const eval::BacktestConfig& cfg) {
    Summary s;
    const eval::ModelForecasts* base = nullptr;
    for (const auto& m : f.forecasts)
        if (m.model == cfg.baseline) base = &m;
    s.baseline = base ? models::to_string(cfg.baseline) : "";
    for (const auto& m : f.forecasts) s.reports.push_back(eval::evaluate_model(m, f.realized_total, base, cfg));
    return s;
}

Json summary_json(const Summary& s, const eval::BacktestConfig& cfg) {
    Json j;
    j["baseline"] = s.baseline;
    j["q0"] = cfg.q0;
    j["xi"] = cfg.xi;
    Json models = Json::array();
    for (const auto& r : s.reports) models.push_back(to_json(r));
    j["models"] = models;
    return j;
}

std::string summary_csv(const Summary& s, const eval::BacktestConfig&) {
    std::ostringstream os;
    const auto f = [](double v) { return format_double(v); };
    os << "# loss\nmodel,mspe,qlike\n";
    for (const auto& r : s.reports) os << r.model << ',' << f(r.mspe) << ',' << f(r.qlike) << '\n';
    os << "\n# dm (baseline " << s.baseline << ")\nmodel,mspe_stat,mspe_p,qlike_stat,qlike_p,note\n";
    for (const auto& r : s.reports) {
        if (r.model == s.baseline) continue;
        if (r.dm_mspe && r.dm_qlike)
            os << r.model << ',' << f(r.dm_mspe->stat) << ',' << f(r.dm_mspe->p_value) << ',' << f(r.dm_qlike->stat)
               << ',' << f(r.dm_qlike->p_value) << ",\n";
        else
            os << r.model << ",,,,," << (r.dm_error.find("identical") != std::string::npos ? "identical losses"
                                                                                           : "unavailable")
               << '\n';
    }
    os << "\n# coverage\nmodel,q0,hit_rate,lruc_stat,lruc_p,lrcc_stat,lrcc_p,dq_stat,dq_p\n";
    for (const auto& r : s.reports)
        for (const auto& [q, c] : r.coverage) {
            if (!c.error.empty()) {
                os << r.model << ',' << f(q) << ",,,,,,,\n";
                continue;
            }
            os << r.model << ',' << f(q) << ',' << f(c.hit_rate) << ',' << f(c.lruc.stat) << ',' << f(c.lruc.p_value)
               << ',' << f(c.lrcc.stat) << ',' << f(c.lrcc.p_value) << ',' << f(c.dq.stat) << ','
               << f(c.dq.p_value) << '\n';
        }
    os << "\n# utility\nmodel,xi,sharpe,expected_utility\n";
    for (const auto& r : s.reports)
        for (const auto& [xi, u] : r.utility)
            os << r.model << ',' << f(xi) << ',' << f(u.sharpe) << ',' << f(u.expected_utility) << '\n';
    os << "\n# persistence\nmodel,a,b,first_lag,max_abs\n";
    for (const auto& r : s.reports)
        if (r.persistence)
            os << r.model << ',' << f(r.persistence->a) << ',' << f(r.persistence->b) << ','
               << f(r.persistence->first_lag) << ',' << f(r.persistence->max_abs) << '\n';
    os << "\n# acf\nmodel,lag,acf\n";
    for (const auto& r : s.reports)
        if (r.persistence)
            for (std::size_t k = 1; k < r.persistence->acf.size(); ++k)
                os << r.model << ',' << k << ',' << f(r.persistence->acf[k]) << '\n';
    return os.str();
}

}  // namespace ogi::io
