#pragma once

#include <cstdint>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ogi/backtest.hpp"
#include "ogi/core.hpp"
#include "ogi/estimation.hpp"
#include "ogi/models.hpp"
#include "ogi/prv.hpp"
#include "ogi/simulator.hpp"

namespace ogi::io {

using Json = nlohmann::ordered_json;

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
/// Whole-string parse; throws IoError mentioning `what`.
double parse_double(std::string_view s, const std::string& what);

// ---- CSV ------------------------------------------------------------------

/// Header plus rows of numbers. Every row has header.size() fields.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const;
    std::vector<double> values(const std::string& name) const;
};

void write_table(std::ostream& os, const Table& t);
/// `source` names the input in error messages, which carry the line number.
Table read_table(std::istream& is, const std::string& source = "<stream>");

/// day_index,time,log_price: one row per tick, time as an absolute day fraction.
void write_highfreq(std::ostream& os, const DaySeries& days);
/// Days take their open and close from the first and last tick.
DaySeries read_highfreq(std::istream& is, double lambda, const std::string& source = "<stream>");

struct DailyRow {
    int day_index = 0;
    double open_log_price = 0.0;
    double close_log_price = 0.0;
};

void write_daily(std::ostream& os, const std::vector<DailyRow>& rows);
std::vector<DailyRow> read_daily(std::istream& is, const std::string& source = "<stream>");
std::vector<DailyRow> daily_rows(const DaySeries& days);

/// day_index,rv
void write_rv(std::ostream& os, const std::vector<prv::PrvResult>& r);
struct RvRow {
    int day_index = 0;
    double rv = 0.0;
};
std::vector<RvRow> read_rv(std::istream& is, const std::string& source = "<stream>");

/// day_index,iv_H,iv_L,iv,ov,jump_var over the kept days.
void write_truth(std::ostream& os, const sim::SimOutput& sim);

/// Joins daily prices and RV by day_index; RV days outside the daily file are
/// ignored and an empty RV list gives zeros.
models::DailyData join_daily(const std::vector<DailyRow>& daily, const std::vector<RvRow>& rv, double lambda);

// ---- files ----------------------------------------------------------------

std::string read_text(const std::filesystem::path& p);
/// Writes and flushes; throws IoError if the file cannot be written.
void write_text(const std::filesystem::path& p, std::string_view text);
template <class F>
std::string to_text(F&& write) {
    std::ostringstream os;
    write(os);
    return os.str();
}

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

// ---- configuration ------------------------------------------------------

/// Flat typed key=value configuration. Lines starting with '#' and blank
/// lines are ignored; unknown keys and malformed values are errors.
struct RunConfig {
    double lambda = kDefaultLambda;
    prv::PrvConfig prv;
    std::string fit_model = "ogi";
    est::EstimationConfig estimation;
    eval::BacktestConfig backtest;
    sim::SimConfig sim;

    static RunConfig parse(std::istream& is, const std::string& source = "<stream>");
    static RunConfig load(const std::filesystem::path& p);
    void set(const std::string& key, const std::string& value);
    /// Every key with its resolved value, one per line, in a fixed order.
    std::string resolved() const;
    static std::vector<std::string> keys();
    /// Overrides every seed (simulation, optimizer).
    void set_seed(std::uint64_t seed);
};

// ---- JSON -----------------------------------------------------------------

Json to_json(const GarchTheta& g);
Json to_json(const est::FitReport& r);
est::FitReport fit_report_from_json(const Json& j);
Json to_json(const models::ModelFit& f);
Json to_json(const eval::ModelReport& r);

/// Manifest for an output directory: seed, config hash and FNV-1a of each
/// listed file. The timestamp is the only run-dependent field.
Json manifest(const std::string& command, std::uint64_t seed, const std::string& resolved_config,
              const std::filesystem::path& dir, const std::vector<std::string>& files);

// ---- backtest artifacts -------------------------------------------------

/// Per-model forecasts_<model>.csv: day_index, realized_total, forecast,
/// forecast_return_scale, return, var_<q0>...
void write_forecasts(const std::filesystem::path& dir, const eval::BacktestResult& r,
                     const std::vector<int>& day_index);

/// Reads every forecasts_*.csv in dir (sorted by model order).
struct LoadedForecasts {
    std::vector<eval::ModelForecasts> forecasts;
    std::vector<double> realized_total;
    std::vector<int> day_index;
};
LoadedForecasts read_forecasts(const std::filesystem::path& dir);

/// Summary tables from evaluated forecasts.
struct Summary {
    std::vector<eval::ModelReport> reports;
    std::string baseline;
};
Summary summarize(const LoadedForecasts& f, const eval::BacktestConfig& cfg);

Json summary_json(const Summary& s, const eval::BacktestConfig& cfg);
/// One CSV block per table, separated by a blank line, each preceded by "# name".
std::string summary_csv(const Summary& s, const eval::BacktestConfig& cfg);

}  // namespace ogi::io
