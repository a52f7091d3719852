#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ogi/estimation.hpp"
#include "ogi/evaluation.hpp"
#include "ogi/models.hpp"

namespace ogi::eval {

struct BacktestConfig {
    std::size_t window = 500;
    std::vector<double> q0 = {0.01, 0.02, 0.05, 0.1, 0.2};
    std::vector<double> xi = {2.5, 5.0};
    std::size_t refit_stride = 1;
    std::size_t var_min_in_sample = kVarMinInSample;
    int dq_lags = 4;
    std::optional<int> dm_lag;
    models::Model baseline = models::Model::Ogi;
    est::EstimationConfig estimation;
    /// Worker threads; 0 means resolve_threads().
    int threads = 0;

    void check() const;
};

/// OGI_THREADS when set to a positive integer, otherwise the hardware concurrency.
int resolve_threads(int requested = 0);

/// One-day-ahead forecasts of one model over the evaluation period.
struct ModelForecasts {
    models::Model model;
    std::vector<double> forecast;               // whole-day scale
    std::vector<double> forecast_return_scale;  // matches `returns`
    std::vector<double> returns;                // realized returns on each forecast day
    std::map<double, std::vector<double>> var;  // keyed by q0
    int refits = 0;
    int nonconverged_refits = 0;
    /// Only for the OGI model: per refit, Z statistics of the listed aggregates.
    std::vector<std::vector<est::ZStat>> z_stats;
};

struct CoverageResult {
    double hit_rate = 0.0;
    TestResult lruc, lrcc, dq;
    std::string error;  // non-empty when the tests could not be computed
};

struct UtilitySummary {
    double sharpe = 0.0;
    double expected_utility = 0.0;
};

struct ModelReport {
    std::string model;
    std::string return_convention;
    double mspe = 0.0;
    double qlike = 0.0;
    std::optional<TestResult> dm_mspe, dm_qlike;  // against the baseline
    std::string dm_error;
    std::map<double, CoverageResult> coverage;
    std::map<double, UtilitySummary> utility;
    std::optional<PersistenceResult> persistence;
    std::string persistence_error;
    int refits = 0;
    int nonconverged_refits = 0;
};

struct BacktestResult {
    BacktestConfig config;
    std::size_t first_day = 0;           // index into the data of the first forecast day
    std::vector<double> realized_total;  // over the forecast days
    std::vector<ModelForecasts> forecasts;
    std::vector<ModelReport> reports;
    std::string baseline;
};

/// Rolling window: for each day t >= window, fit on [t - window, t) (refitting
/// every refit_stride days) and forecast day t.
std::vector<ModelForecasts> rolling_forecasts(const models::DailyData& data, const std::vector<models::Model>& models,
                                              const BacktestConfig& cfg);

/// Metrics and tests for forecasts already made.
ModelReport evaluate_model(const ModelForecasts& f, const std::vector<double>& realized_total,
                           const ModelForecasts* baseline, const BacktestConfig& cfg);

BacktestResult run_backtest(const models::DailyData& data, const std::vector<models::Model>& models,
                            const BacktestConfig& cfg);

/// Sorted sample against standard normal quantiles at (i - 0.5)/n.
std::vector<std::pair<double, double>> normal_qq(std::vector<double> sample);

}  // namespace ogi::eval
