#pragma once

#include "sentivol/varfit.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sentivol::report {

/// Number of significance stars: one each for |t| strictly above the two-sided
/// 10%, 5% and 1% critical values. dof <= 0 uses the normal distribution.
int significance_stars(double t_stat, double dof);

/// Three significant figures below 1 in magnitude, three decimals otherwise;
/// trailing zeros kept ("0.0370", "-1.980").
std::string format_coefficient(double value);

enum class Bracket {
    StdError, // "0.194** (0.095)"
    TStat,    // "-3.81** (-2.86)"
};

struct CoefCell {
    double coef = 0.0;
    double std_error = 0.0;
    double dof = 0.0;
};

std::string format_cell(const CoefCell& cell, Bracket bracket = Bracket::StdError);

/// Grouped coefficient table: column groups (e.g. maturities) each split into
/// sub-columns (e.g. skew, cur); one row per regressor. Rendered tab-separated.
struct CoefTable {
    std::string corner;
    std::vector<std::string> groups;
    std::vector<std::string> sub_columns; // may be empty: one column per group
    std::vector<std::string> row_labels;
    /// cells[row][group * max(1, sub_columns.size()) + sub]
    std::vector<std::vector<std::optional<CoefCell>>> cells;
};

std::string render_coef_table(const CoefTable& table, Bracket bracket = Bracket::StdError);

/// Row label for a regressor: "hfs(t-1)" style for lags, names otherwise.
/// `regressors` selects rows by model regressor name; `equations` selects the
/// columns in order (groups x sub-columns flattened).
CoefTable model_table(const var::VarModel& model, const std::vector<std::string>& regressors,
                      const std::vector<std::string>& equations, std::vector<std::string> groups,
                      std::vector<std::string> sub_columns);

/// equation, regressor, coef, std_error, t_stat, p_value, stars, cell.
std::string coefficient_report(const var::VarModel& model);

/// Accuracy table: one column per method, rows by bucket, MAPE as percentages
/// with two decimals.
struct AccuracyColumn {
    std::string method;
    std::vector<std::pair<std::string, double>> rows; // bucket label, fraction
};

std::string render_accuracy_table(const std::vector<AccuracyColumn>& columns);

} // namespace sentivol::report
