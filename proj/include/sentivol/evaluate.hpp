#pragma once

#include "sentivol/varfit.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sentivol::evaluate {

struct ForecastRecord {
    Date date;
    std::string variable;
    double predicted = 0.0;
    double realized = 0.0;
};

/// What to fit at every rolling step.
struct ModelSpec {
    std::vector<std::string> variables; // endogenous columns of the panel
    std::vector<std::string> targets;   // recorded columns (subset of variables)
    std::optional<int> lags;            // fixed p; empty means AIC over 1..max_lags
    int max_lags = 8;
};

struct RollingConfig {
    Eigen::Index initial_window = 500;
    Eigen::Index step = 1;
    bool expanding = false;
    Eigen::Index min_window = 250;
    Eigen::Index min_forecasts = 30;
};

struct RollingResult {
    std::vector<ForecastRecord> records;
    int lags = 1;
    std::vector<std::string> warnings;
};

/// Rows t = W, W + step, ... are forecast from a model fit on the preceding
/// window (fixed length W, or all rows from 0 when expanding). The lag order
/// is chosen once on the first window when not fixed. Throws WindowTooShort
/// when W < min_window or fewer than min_forecasts rows remain.
RollingResult rolling_forecast(const var::StatePanel& panel, const ModelSpec& spec, const RollingConfig& config = {},
                               const var::StatePanel* exog = nullptr);

/// Tomorrow equals today, on the same rows rolling_forecast would predict.
std::vector<ForecastRecord> random_walk_forecast(const var::StatePanel& panel, const std::vector<std::string>& targets,
                                                 const RollingConfig& config = {});

/// mean(|pred - real| / |real|). Throws Empty, ZeroRealized.
double mape(const std::vector<ForecastRecord>& records);
/// mean((pred - real)^2). Throws Empty.
double mspe(const std::vector<ForecastRecord>& records);

std::vector<ForecastRecord> filter(const std::vector<ForecastRecord>& records,
                                   const std::function<bool(const ForecastRecord&)>& keep);

/// Maturity in months parsed from an "iv_<m>m_<level>" name, or nullopt.
std::optional<int> maturity_of(std::string_view variable);
/// Moneyness parsed from an "iv_<m>m_<level>" name, or nullopt.
std::optional<double> moneyness_of(std::string_view variable);

struct BucketError {
    std::string bucket; // "1M", "3M", "12M", "Total", "6M"
    double mape = 0.0;
    double mspe = 0.0;
    std::size_t n_records = 0;
};

struct AccuracyReport {
    std::string method;
    std::vector<BucketError> buckets;
    std::size_t n_days = 0;

    const BucketError& bucket(std::string_view name) const;
};

/// Buckets 1M, 3M, 12M, Total, then 6M when present. Total covers all records.
AccuracyReport accuracy(const std::string& method, const std::vector<ForecastRecord>& records);

struct SentimentVariant {
    std::string label;
    SentimentSeries hfs;
    SentimentSeries lfs;
};

struct Comparison {
    std::vector<AccuracyReport> reports;
    std::vector<std::pair<std::string, std::vector<ForecastRecord>>> forecasts; // per method, report order
    std::vector<std::string> warnings;
};

struct CompareOptions {
    bool include_none = true;
    bool include_random_walk = false;
    std::optional<int> lags;
    int max_lags = 8;
    RollingConfig rolling;
};

/// One report per baseline and variant on identical forecast dates. `surface`
/// holds only surface variables; each variant appends its hfs and lfs. Throws
/// DateMismatch when a variant's dates differ from the surface panel's.
Comparison compare_methods(const var::StatePanel& surface, const std::vector<SentimentVariant>& variants,
                           const CompareOptions& options = {}, const var::StatePanel* exog = nullptr);

struct DateRange {
    Date first;
    Date last;
};

struct CoefficientDelta {
    std::string equation;
    std::string regressor;
    std::vector<double> coef;       // per window
    std::vector<double> std_error;  // per window
    std::vector<double> t_stat;     // per window
    std::vector<int> stars;         // per window
    std::vector<double> delta;      // coef[w] - coef[0]
    bool sign_flip = false;         // significant at 5% in two windows with opposite signs
    bool significance_change = false; // significant at 5% in some windows only
};

struct RobustnessReport {
    std::vector<DateRange> windows;
    std::vector<int> sample_sizes;
    std::vector<CoefficientDelta> rows;
};

/// Fits the same specification on each inclusive date range and compares
/// coefficients against the first window. Throws InsufficientSample.
RobustnessReport subperiod_robustness(const var::StatePanel& panel, const std::vector<DateRange>& windows,
                                      const std::vector<std::string>& variables, int lags,
                                      const var::StatePanel* exog = nullptr);

/// date, variable, predicted, realized.
std::string write_forecasts_csv(const std::vector<ForecastRecord>& records);
/// method, bucket, mape, mspe, n_days.
std::string write_accuracy_csv(const std::vector<AccuracyReport>& reports);
std::string write_robustness_csv(const RobustnessReport& report);

} // namespace sentivol::evaluate
