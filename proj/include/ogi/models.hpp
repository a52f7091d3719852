#pragma once

#include <string>
#include <vector>

#include "ogi/core.hpp"
#include "ogi/estimation.hpp"
#include "ogi/filters.hpp"

namespace ogi::models {

/// Daily series aligned so that entry i holds day i: session RV, squared and
/// signed overnight return to the next open, open-to-open and open-to-close
/// returns.
struct DailyData {
    std::vector<double> rv;
    std::vector<double> ov;
    std::vector<double> open_to_open;
    std::vector<double> session_returns;
    std::vector<double> overnight_returns;
    double lambda = kDefaultLambda;

    std::size_t size() const { return rv.size(); }
    void check() const;
    /// Days [begin, end).
    DailyData slice(std::size_t begin, std::size_t end) const;
    filters::FilterInput filter_input() const;
    /// RV + squared overnight return: the whole-day realized measure.
    std::vector<double> realized_total() const;

    /// From N days of open/close log prices and session RV; the last day has
    /// no following open, so N - 1 entries result.
    static DailyData from_prices(const std::vector<double>& open, const std::vector<double>& close,
                                 const std::vector<double>& rv, double lambda = kDefaultLambda);
};

enum class Model { Ogi, SOgi, AOgi, GjrOgi, Garch, Gjr, RGarch, Har, LogHar };

std::string to_string(Model m);
Model model_from_string(const std::string& s);
const std::vector<Model>& all_models();

enum class ReturnConvention { OpenToOpen, OpenToClose };
ReturnConvention return_convention(Model m);
std::string to_string(ReturnConvention c);

/// Estimated parameters of any model, in the order of param_names().
struct ModelFit {
    Model model = Model::Ogi;
    std::vector<double> params;
    double objective = 0.0;
    bool converged = false;
    /// 1 + mean(OV/RV) for the session-only models, 1 otherwise.
    double adjustment = 1.0;
    /// Only for Model::Ogi.
    std::vector<est::ZStat> z_stats;
    std::size_t n = 0;
};

std::vector<std::string> param_names(Model m);

ModelFit fit_model(Model m, const DailyData& data, const est::EstimationConfig& cfg = {});

/// Conditional volatility over data and the one-day-ahead value, on the
/// whole-day scale (session-only models are multiplied by the adjustment).
/// `session_*` carry the unadjusted values matching the model's own return
/// convention; they equal the whole-day ones for open-to-open models.
struct ModelPath {
    std::vector<double> fitted;
    double forecast = 0.0;
    std::vector<double> fitted_return_scale;
    double forecast_return_scale = 0.0;
};

ModelPath run_model(const ModelFit& fit, const DailyData& data);

/// Returns matching the model's convention.
const std::vector<double>& model_returns(Model m, const DailyData& data);

}  // namespace ogi::models
