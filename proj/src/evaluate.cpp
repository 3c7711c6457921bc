#include "sentivol/evaluate.hpp"

#include "sentivol/csv.hpp"
#include "sentivol/error.hpp"
#include "sentivol/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

namespace sentivol::evaluate {

using Eigen::Index;
using var::StatePanel;

namespace {

Index forecast_count(Index rows, const RollingConfig& config) {
    if (config.step < 1) {
        fail(ErrorCode::ConfigError, "step must be >= 1");
    }
    if (config.initial_window < config.min_window) {
        fail(ErrorCode::WindowTooShort, "initial window " + std::to_string(config.initial_window) + " < " +
                                            std::to_string(config.min_window));
    }
    const Index count = rows > config.initial_window ? (rows - config.initial_window + config.step - 1) / config.step : 0;
    if (count < config.min_forecasts) {
        fail(ErrorCode::WindowTooShort, std::to_string(count) + " forecast rows after a window of " +
                                            std::to_string(config.initial_window) + ", need " +
                                            std::to_string(config.min_forecasts));
    }
    return count;
}

void require_same_dates(const StatePanel& panel, const StatePanel* exog) {
    if (exog != nullptr && exog->dates != panel.dates) {
        fail(ErrorCode::MisalignedDates, "exogenous dates differ from the state panel");
    }
}

} // namespace

RollingResult rolling_forecast(const StatePanel& panel, const ModelSpec& spec, const RollingConfig& config,
                               const StatePanel* exog) {
    require_same_dates(panel, exog);
    const Index count = forecast_count(panel.rows(), config);
    const StatePanel sub = spec.variables.empty() ? panel : panel.select(spec.variables);
    std::vector<Index> target_cols;
    for (const auto& t : spec.targets) {
        target_cols.push_back(sub.index_of(t));
    }

    const Index w = config.initial_window;
    RollingResult result;
    if (spec.lags) {
        result.lags = *spec.lags;
    } else {
        const StatePanel first = sub.slice(0, w);
        const std::optional<StatePanel> first_exog = exog ? std::optional(exog->slice(0, w)) : std::nullopt;
        result.lags = var::select_lag(first, spec.max_lags, first_exog ? &*first_exog : nullptr).p;
    }

    std::set<std::string> seen_warnings;
    result.records.reserve(static_cast<std::size_t>(count) * target_cols.size());
    for (Index t = w; t < sub.rows(); t += config.step) {
        const Index begin = config.expanding ? 0 : t - w;
        const StatePanel window = sub.slice(begin, t);
        const std::optional<StatePanel> window_exog = exog ? std::optional(exog->slice(begin, t)) : std::nullopt;
        const var::VarModel model = var::fit_var(window, result.lags, window_exog ? &*window_exog : nullptr);
        for (const auto& msg : model.warnings) {
            if (seen_warnings.insert(msg).second) {
                result.warnings.push_back(format_date(sub.dates[static_cast<std::size_t>(t)]) + ": " + msg);
            }
        }
        const Eigen::VectorXd pred = var::forecast_next(model, sub, t, exog);
        for (std::size_t i = 0; i < target_cols.size(); ++i) {
            result.records.push_back(ForecastRecord{sub.dates[static_cast<std::size_t>(t)], spec.targets[i],
                                                    pred(target_cols[i]), sub.values(t, target_cols[i])});
        }
    }
    return result;
}

std::vector<ForecastRecord> random_walk_forecast(const StatePanel& panel, const std::vector<std::string>& targets,
                                                 const RollingConfig& config) {
    forecast_count(panel.rows(), config);
    std::vector<Index> cols;
    for (const auto& t : targets) {
        cols.push_back(panel.index_of(t));
    }
    std::vector<ForecastRecord> out;
    for (Index t = config.initial_window; t < panel.rows(); t += config.step) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            out.push_back(ForecastRecord{panel.dates[static_cast<std::size_t>(t)], targets[i],
                                         panel.values(t - 1, cols[i]), panel.values(t, cols[i])});
        }
    }
    return out;
}

double mape(const std::vector<ForecastRecord>& records) {
    if (records.empty()) {
        fail(ErrorCode::Empty, "no forecast records");
    }
    double sum = 0.0;
    for (const auto& r : records) {
        if (r.realized == 0.0) {
            fail(ErrorCode::ZeroRealized, r.variable + " on " + format_date(r.date));
        }
        sum += std::fabs(r.predicted - r.realized) / std::fabs(r.realized);
    }
    return sum / static_cast<double>(records.size());
}

double mspe(const std::vector<ForecastRecord>& records) {
    if (records.empty()) {
        fail(ErrorCode::Empty, "no forecast records");
    }
    double sum = 0.0;
    for (const auto& r : records) {
        const double e = r.predicted - r.realized;
        sum += e * e;
    }
    return sum / static_cast<double>(records.size());
}

std::vector<ForecastRecord> filter(const std::vector<ForecastRecord>& records,
                                   const std::function<bool(const ForecastRecord&)>& keep) {
    std::vector<ForecastRecord> out;
    std::copy_if(records.begin(), records.end(), std::back_inserter(out), keep);
    return out;
}

namespace {

// "iv_<m>m_<level>" -> (m, level digits)
std::optional<std::pair<int, int>> parse_iv_name(std::string_view name) {
    if (!name.starts_with("iv_")) {
        return std::nullopt;
    }
    name.remove_prefix(3);
    const auto m_end = name.find("m_");
    if (m_end == std::string_view::npos) {
        return std::nullopt;
    }
    int months = 0;
    int level = 0;
    const std::string_view m_text = name.substr(0, m_end);
    const std::string_view l_text = name.substr(m_end + 2);
    const auto r1 = std::from_chars(m_text.data(), m_text.data() + m_text.size(), months);
    const auto r2 = std::from_chars(l_text.data(), l_text.data() + l_text.size(), level);
    if (r1.ec != std::errc{} || r1.ptr != m_text.data() + m_text.size() || r2.ec != std::errc{} ||
        r2.ptr != l_text.data() + l_text.size()) {
        return std::nullopt;
    }
    return std::pair{months, level};
}

} // namespace

std::optional<int> maturity_of(std::string_view variable) {
    const auto parsed = parse_iv_name(variable);
    return parsed ? std::optional(parsed->first) : std::nullopt;
}

std::optional<double> moneyness_of(std::string_view variable) {
    const auto parsed = parse_iv_name(variable);
    return parsed ? std::optional(parsed->second / 1000.0) : std::nullopt;
}

const BucketError& AccuracyReport::bucket(std::string_view name) const {
    for (const auto& b : buckets) {
        if (b.bucket == name) {
            return b;
        }
    }
    fail(ErrorCode::UnknownVariable, "bucket " + std::string(name));
}

AccuracyReport accuracy(const std::string& method, const std::vector<ForecastRecord>& records) {
    AccuracyReport report;
    report.method = method;
    std::set<Date> days;
    for (const auto& r : records) {
        days.insert(r.date);
    }
    report.n_days = days.size();
    const auto add = [&](const std::string& label, const std::vector<ForecastRecord>& subset) {
        report.buckets.push_back(BucketError{label, mape(subset), mspe(subset), subset.size()});
    };
    for (int months : {1, 3, 12}) {
        const auto subset = filter(records, [months](const ForecastRecord& r) { return maturity_of(r.variable) == months; });
        if (!subset.empty()) {
            add(std::to_string(months) + "M", subset);
        }
    }
    add("Total", records);
    const auto six = filter(records, [](const ForecastRecord& r) { return maturity_of(r.variable) == 6; });
    if (!six.empty()) {
        add("6M", six);
    }
    return report;
}

Comparison compare_methods(const StatePanel& surface, const std::vector<SentimentVariant>& variants,
                           const CompareOptions& options, const StatePanel* exog) {
    Comparison out;
    const std::vector<std::string>& targets = surface.names;
    const ModelSpec base{surface.names, targets, options.lags, options.max_lags};

    const auto add = [&](const std::string& label, std::vector<ForecastRecord> records) {
        out.reports.push_back(accuracy(label, records));
        out.forecasts.emplace_back(label, std::move(records));
    };

    if (options.include_none) {
        auto r = rolling_forecast(surface, base, options.rolling, exog);
        for (auto& w : r.warnings) {
            out.warnings.push_back("none: " + w);
        }
        add("none", std::move(r.records));
    }
    for (const auto& v : variants) {
        if (v.hfs.dates != surface.dates || v.lfs.dates != surface.dates) {
            fail(ErrorCode::DateMismatch, "variant '" + v.label + "' does not cover the surface dates");
        }
        StatePanel panel = surface;
        panel.names.push_back("hfs");
        panel.names.push_back("lfs");
        panel.values.conservativeResize(Eigen::NoChange, surface.cols() + 2);
        panel.values.col(surface.cols()) = Eigen::Map<const Eigen::VectorXd>(v.hfs.values.data(), surface.rows());
        panel.values.col(surface.cols() + 1) = Eigen::Map<const Eigen::VectorXd>(v.lfs.values.data(), surface.rows());
        ModelSpec spec = base;
        spec.variables = panel.names;
        auto r = rolling_forecast(panel, spec, options.rolling, exog);
        for (auto& w : r.warnings) {
            out.warnings.push_back(v.label + ": " + w);
        }
        add(v.label, std::move(r.records));
    }
    if (options.include_random_walk) {
        add("random_walk", random_walk_forecast(surface, targets, options.rolling));
    }

    // Paired comparison: every method scored on the same dates.
    std::optional<std::set<Date>> reference;
    for (const auto& [label, records] : out.forecasts) {
        std::set<Date> days;
        for (const auto& r : records) {
            days.insert(r.date);
        }
        if (!reference) {
            reference = std::move(days);
        } else if (days != *reference) {
            fail(ErrorCode::DateMismatch, "method '" + label + "' forecast dates differ");
        }
    }
    return out;
}

RobustnessReport subperiod_robustness(const StatePanel& panel, const std::vector<DateRange>& windows,
                                      const std::vector<std::string>& variables, int lags, const StatePanel* exog) {
    require_same_dates(panel, exog);
    if (windows.empty()) {
        fail(ErrorCode::ConfigError, "no robustness windows");
    }
    const StatePanel sub = variables.empty() ? panel : panel.select(variables);
    RobustnessReport report;
    report.windows = windows;
    std::vector<var::VarModel> models;
    for (const auto& w : windows) {
        const auto lo = std::lower_bound(sub.dates.begin(), sub.dates.end(), w.first);
        const auto hi = std::upper_bound(sub.dates.begin(), sub.dates.end(), w.last);
        const auto begin = static_cast<Index>(lo - sub.dates.begin());
        const auto end = static_cast<Index>(hi - sub.dates.begin());
        if (end - begin <= lags) {
            fail(ErrorCode::InsufficientSample, "window " + format_date(w.first) + ".." + format_date(w.last) +
                                                    " has " + std::to_string(std::max<Index>(end - begin, 0)) + " rows");
        }
        const std::optional<StatePanel> e = exog ? std::optional(exog->slice(begin, end)) : std::nullopt;
        models.push_back(var::fit_var(sub.slice(begin, end), lags, e ? &*e : nullptr));
        report.sample_sizes.push_back(models.back().sample_size);
    }

    const var::VarModel& ref = models.front();
    for (std::size_t eq = 0; eq < ref.names.size(); ++eq) {
        for (std::size_t rg = 0; rg < ref.regressor_names.size(); ++rg) {
            CoefficientDelta row;
            row.equation = ref.names[eq];
            row.regressor = ref.regressor_names[rg];
            for (const auto& m : models) {
                const auto ei = std::find(m.names.begin(), m.names.end(), row.equation);
                const auto ri = std::find(m.regressor_names.begin(), m.regressor_names.end(), row.regressor);
                if (ei == m.names.end() || ri == m.regressor_names.end()) {
                    row.coef.push_back(std::nan(""));
                    row.std_error.push_back(std::nan(""));
                    row.t_stat.push_back(std::nan(""));
                    row.stars.push_back(0);
                } else {
                    const auto r = static_cast<Index>(ri - m.regressor_names.begin());
                    const auto c = static_cast<Index>(ei - m.names.begin());
                    row.coef.push_back(m.coef(r, c));
                    row.std_error.push_back(m.std_errors(r, c));
                    row.t_stat.push_back(m.t_stats(r, c));
                    row.stars.push_back(report::significance_stars(m.t_stats(r, c), m.dof));
                }
                row.delta.push_back(row.coef.back() - row.coef.front());
            }
            bool any_sig = false;
            bool any_insig = false;
            bool sig_pos = false;
            bool sig_neg = false;
            for (std::size_t w = 0; w < models.size(); ++w) {
                const bool sig = row.stars[w] >= 2;
                any_sig |= sig;
                any_insig |= !sig;
                sig_pos |= sig && row.coef[w] > 0.0;
                sig_neg |= sig && row.coef[w] < 0.0;
            }
            row.sign_flip = sig_pos && sig_neg;
            row.significance_change = any_sig && any_insig;
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

std::string write_forecasts_csv(const std::vector<ForecastRecord>& records) {
    std::string out = "date,variable,predicted,realized\n";
    for (const auto& r : records) {
        out += format_date(r.date) + "," + r.variable + "," + format_double(r.predicted) + "," +
               format_double(r.realized) + "\n";
    }
    return out;
}

std::string write_accuracy_csv(const std::vector<AccuracyReport>& reports) {
    std::string out = "method,bucket,mape,mspe,n_days\n";
    for (const auto& rep : reports) {
        for (const auto& b : rep.buckets) {
            out += rep.method + "," + b.bucket + "," + format_double(b.mape) + "," + format_double(b.mspe) + "," +
                   std::to_string(rep.n_days) + "\n";
        }
    }
    return out;
}

std::string write_robustness_csv(const RobustnessReport& report) {
    std::string out = "equation,regressor";
    for (std::size_t w = 0; w < report.windows.size(); ++w) {
        const std::string s = std::to_string(w + 1);
        out += ",coef_" + s + ",std_error_" + s + ",t_stat_" + s + ",stars_" + s + ",delta_" + s;
    }
    out += ",sign_flip,significance_change\n";
    for (const auto& row : report.rows) {
        out += row.equation + "," + row.regressor;
        for (std::size_t w = 0; w < row.coef.size(); ++w) {
            out += "," + format_double(row.coef[w]) + "," + format_double(row.std_error[w]) + "," +
                   format_double(row.t_stat[w]) + "," + std::string(static_cast<std::size_t>(row.stars[w]), '*') +
                   "," + format_double(row.delta[w]);
        }
        out += std::string(",") + (row.sign_flip ? "1" : "0") + "," + (row.significance_change ? "1" : "0") + "\n";
    }
    return out;
}

} // namespace sentivol::evaluate
