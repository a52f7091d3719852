// Command-line driver: simulate, prv, fit, backtest, report.
// Exit codes: 0 success, 1 usage or I/O error, 2 numerical failure or non-convergence.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ogi/backtest.hpp"
#include "ogi/estimation.hpp"
#include "ogi/io.hpp"
#include "ogi/models.hpp"
#include "ogi/prv.hpp"
#include "ogi/simulator.hpp"

namespace fs = std::filesystem;
using namespace ogi;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNumerical = 2;

io::RunConfig load_config(const std::string& path, std::optional<std::uint64_t> seed) {
    io::RunConfig c = path.empty() ? io::RunConfig{} : io::RunConfig::load(path);
    if (seed) c.set_seed(*seed);
    return c;
}

void ensure_dir(const fs::path& d) {
    std::error_code ec;
    fs::create_directories(d, ec);
    if (ec || !fs::is_directory(d)) throw io::IoError("cannot create output directory " + d.string());
}

void write_manifest(const fs::path& dir, const std::string& command, const io::RunConfig& c,
                    std::vector<std::string> files, std::uint64_t seed) {
    io::write_text(dir / "config.txt", c.resolved());
    files.insert(files.begin(), "config.txt");
    io::write_text(dir / "manifest.json", io::manifest(command, seed, c.resolved(), dir, files).dump(2) + "\n");
}

models::DailyData load_data(const std::string& daily_path, const std::string& rv_path, double lambda) {
    std::istringstream d(io::read_text(daily_path));
    const auto daily = io::read_daily(d, daily_path);
    std::vector<io::RvRow> rv;
    if (!rv_path.empty()) {
        std::istringstream r(io::read_text(rv_path));
        rv = io::read_rv(r, rv_path);
    }
    return io::join_daily(daily, rv, lambda);
}

int cmd_simulate(const std::string& config, const std::string& out, std::optional<std::uint64_t> seed) {
    const io::RunConfig c = load_config(config, seed);
    const sim::SimOutput s = sim::simulate(c.sim);
    const DaySeries obs = sim::make_observations(s, c.sim.noise, c.sim.m_obs, c.sim.seed);
    const fs::path dir(out);
    ensure_dir(dir);
    io::write_text(dir / "highfreq.csv", io::to_text([&](std::ostream& os) { io::write_highfreq(os, obs); }));
    io::write_text(dir / "daily.csv", io::to_text([&](std::ostream& os) { io::write_daily(os, io::daily_rows(obs)); }));
    io::write_text(dir / "truth.csv", io::to_text([&](std::ostream& os) { io::write_truth(os, s); }));
    write_manifest(dir, "simulate", c, {"highfreq.csv", "daily.csv", "truth.csv"}, c.sim.seed);
    if (s.clamped_steps > 0)
        std::cerr << "warning: spot variance floored at zero on " << s.clamped_steps << " grid steps\n";
    return kOk;
}

int cmd_prv(const std::string& hf, const std::string& config, const std::string& out) {
    const io::RunConfig c = load_config(config, std::nullopt);
    std::istringstream is(io::read_text(hf));
    const DaySeries days = io::read_highfreq(is, c.lambda, hf);
    const auto r = prv::prv_series(days, c.prv);
    io::write_text(out, io::to_text([&](std::ostream& os) { io::write_rv(os, r); }));
    int floored = 0;
    for (const auto& x : r) floored += x.floored;
    if (floored) std::cerr << "warning: " << floored << " day(s) floored at " << c.prv.floor << "\n";
    return kOk;
}

int cmd_fit(const std::string& rv, const std::string& daily, const std::string& model_name, const std::string& out,
            const std::string& config, std::optional<std::uint64_t> seed) {
    io::RunConfig c = load_config(config, seed);
    const models::Model m = models::model_from_string(model_name.empty() ? c.fit_model : model_name);
    std::string rv_path = rv;
    if ((m == models::Model::Garch || m == models::Model::Gjr) && !rv_path.empty()) {
        std::cerr << "warning: model " << models::to_string(m) << " uses returns only; ignoring " << rv_path << "\n";
        rv_path.clear();
    } else if (rv_path.empty() && m != models::Model::Garch && m != models::Model::Gjr) {
        throw io::IoError("model " + models::to_string(m) + " needs --rv");
    }
    const models::DailyData data = load_data(daily, rv_path, c.lambda);
    bool converged = false;
    io::Json j;
    if (m == models::Model::Ogi) {
        const est::FitReport r = est::fit_ogi(data.filter_input(), c.estimation);
        j = io::to_json(r);
        converged = r.converged;
    } else {
        const models::ModelFit f = models::fit_model(m, data, c.estimation);
        j = io::to_json(f);
        converged = f.converged;
    }
    io::write_text(out, j.dump(2) + "\n");
    if (!converged) {
        std::cerr << "fit did not converge; report written to " << out << "\n";
        return kNumerical;
    }
    return kOk;
}

int cmd_backtest(const std::string& rv, const std::string& daily, const std::string& model_list,
                 std::optional<std::size_t> window, std::optional<std::size_t> stride, const std::string& out,
                 const std::string& config, std::optional<std::uint64_t> seed) {
    io::RunConfig c = load_config(config, seed);
    if (window) c.backtest.window = *window;
    if (stride) c.backtest.refit_stride = *stride;
    std::vector<models::Model> ms;
    std::stringstream ss(model_list);
    for (std::string name; std::getline(ss, name, ',');)
        if (!name.empty()) ms.push_back(models::model_from_string(name));
    if (ms.empty()) throw io::IoError("--models is empty");
    const models::DailyData data = load_data(daily, rv, c.lambda);
    c.backtest.estimation = c.estimation;
    const auto forecasts = eval::rolling_forecasts(data, ms, c.backtest);

    const fs::path dir(out);
    ensure_dir(dir);
    eval::BacktestResult res;
    res.config = c.backtest;
    res.forecasts = forecasts;
    const auto total = data.realized_total();
    res.realized_total.assign(total.begin() + static_cast<std::ptrdiff_t>(c.backtest.window), total.end());
    std::istringstream d(io::read_text(daily));
    const auto rows = io::read_daily(d, daily);
    std::vector<int> day_index;
    for (std::size_t i = c.backtest.window; i < data.size(); ++i) day_index.push_back(rows[i].day_index);
    io::write_forecasts(dir, res, day_index);
    std::vector<std::string> files;
    for (const auto& f : forecasts) files.push_back("forecasts_" + models::to_string(f.model) + ".csv");

    io::Json fits = io::Json::array();
    for (const auto& f : forecasts) {
        io::Json e;
        e["model"] = models::to_string(f.model);
        e["refits"] = f.refits;
        e["nonconverged_refits"] = f.nonconverged_refits;
        fits.push_back(e);
        if (!f.z_stats.empty()) {
            // One QQ table per aggregate Z statistic across refits.
            for (std::size_t k = 0; k < f.z_stats.front().size(); ++k) {
                std::vector<double> z;
                for (const auto& per : f.z_stats)
                    if (k < per.size()) z.push_back(per[k].stat);
                io::Table t;
                t.header = {"theoretical", "sample"};
                for (const auto& [a, b] : eval::normal_qq(z)) t.rows.push_back({a, b});
                const std::string name = "zstat_qq_" + f.z_stats.front()[k].name + ".csv";
                io::write_text(dir / name, io::to_text([&](std::ostream& os) { io::write_table(os, t); }));
                files.push_back(name);
            }
        }
    }
    io::write_text(dir / "fits.json", fits.dump(2) + "\n");
    files.push_back("fits.json");

    const io::Summary s = io::summarize(io::read_forecasts(dir), c.backtest);
    io::write_text(dir / "report.json", io::summary_json(s, c.backtest).dump(2) + "\n");
    io::write_text(dir / "report.csv", io::summary_csv(s, c.backtest));
    io::Table acf;
    acf.header = {"lag"};
    std::vector<const eval::PersistenceResult*> ps;
    for (const auto& r : s.reports)
        if (r.persistence) {
            acf.header.push_back(r.model);
            ps.push_back(&*r.persistence);
        }
    if (!ps.empty()) {
        for (std::size_t k = 1; k < ps.front()->acf.size(); ++k) {
            std::vector<double> row = {static_cast<double>(k)};
            for (const auto* p : ps) row.push_back(p->acf[k]);
            acf.rows.push_back(std::move(row));
        }
        io::write_text(dir / "acf.csv", io::to_text([&](std::ostream& os) { io::write_table(os, acf); }));
        files.push_back("acf.csv");
    }
    files.insert(files.end(), {"report.json", "report.csv"});
    write_manifest(dir, "backtest", c, files, c.estimation.optimizer.seed);
    for (const auto& r : s.reports)
        if (!r.dm_error.empty()) std::cerr << "note: DM test for " << r.model << ": " << r.dm_error << "\n";
    return kOk;
}

int cmd_report(const std::string& in, const std::string& format, const std::string& out) {
    const fs::path dir(in);
    if (!fs::is_directory(dir)) throw io::IoError(in + " is not a directory");
    io::RunConfig c;
    if (fs::exists(dir / "config.txt")) c = io::RunConfig::load(dir / "config.txt");
    const io::LoadedForecasts f = io::read_forecasts(dir);
    const io::Summary s = io::summarize(f, c.backtest);
    const std::string text =
        format == "json" ? io::summary_json(s, c.backtest).dump(2) + "\n" : io::summary_csv(s, c.backtest);
    if (out.empty()) std::cout << text;
    else io::write_text(out, text);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"OGI volatility toolkit"};
    app.require_subcommand(1);
    std::string config, out, hf, rv, daily, model, models_list, in, format = "csv";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> window, stride;

    auto* sim = app.add_subcommand("simulate", "simulate high-frequency and daily data");
    sim->add_option("--config", config, "key=value configuration file")->required()->check(CLI::ExistingFile);
    sim->add_option("--out", out, "output directory")->required();
    sim->add_option("--seed", seed, "override every seed in the configuration");

    auto* prv = app.add_subcommand("prv", "pre-averaged realized volatility per day");
    prv->add_option("--hf", hf, "high-frequency CSV")->required()->check(CLI::ExistingFile);
    prv->add_option("--config", config, "configuration file")->check(CLI::ExistingFile);
    prv->add_option("--out", out, "output RV CSV")->required();

    auto* fit = app.add_subcommand("fit", "fit one model");
    fit->add_option("--rv", rv, "RV CSV")->check(CLI::ExistingFile);
    fit->add_option("--daily", daily, "daily CSV")->required()->check(CLI::ExistingFile);
    fit->add_option("--model", model, "ogi, s-ogi, a-ogi, gjr-ogi, garch, gjr, rgarch, har, loghar");
    fit->add_option("--out", out, "output JSON")->required();
    fit->add_option("--config", config, "configuration file")->check(CLI::ExistingFile);
    fit->add_option("--seed", seed, "optimizer seed");

    auto* bt = app.add_subcommand("backtest", "rolling one-day-ahead forecasts and evaluation");
    bt->add_option("--rv", rv, "RV CSV")->required()->check(CLI::ExistingFile);
    bt->add_option("--daily", daily, "daily CSV")->required()->check(CLI::ExistingFile);
    bt->add_option("--models", models_list, "comma-separated model list")->required();
    bt->add_option("--window", window, "in-sample window in days (default 500)");
    bt->add_option("--refit-stride", stride, "refit every k days (default 1)");
    bt->add_option("--out", out, "output directory")->required();
    bt->add_option("--config", config, "configuration file")->check(CLI::ExistingFile);
    bt->add_option("--seed", seed, "optimizer seed");

    auto* rep = app.add_subcommand("report", "summary tables from a backtest directory");
    rep->add_option("--in", in, "backtest output directory")->required();
    rep->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    rep->add_option("--out", out, "write to a file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (app.got_subcommand(sim)) return cmd_simulate(config, out, seed);
        if (app.got_subcommand(prv)) return cmd_prv(hf, config, out);
        if (app.got_subcommand(fit)) return cmd_fit(rv, daily, model, out, config, seed);
        if (app.got_subcommand(bt)) return cmd_backtest(rv, daily, models_list, window, stride, out, config, seed);
        if (app.got_subcommand(rep)) return cmd_report(in, format, out);
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
