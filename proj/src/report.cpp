#include "sentivol/report.hpp"

#include "sentivol/csv.hpp"
#include "sentivol/error.hpp"
#include "sentivol/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace sentivol::report {

int significance_stars(double t_stat, double dof) {
    if (!std::isfinite(t_stat)) {
        return 0;
    }
    const double a = std::fabs(t_stat);
    int stars = 0;
    for (double alpha : {0.10, 0.05, 0.01}) {
        if (a > stats::two_sided_critical(alpha, dof)) {
            ++stars;
        }
    }
    return stars;
}

std::string format_coefficient(double value) {
    char buf[64];
    if (value == 0.0) {
        return "0.000";
    }
    if (std::fabs(value) >= 1.0) {
        std::snprintf(buf, sizeof buf, "%.3f", value);
        return buf;
    }
    // Decimals that leave three significant digits, checked after rounding.
    int decimals = 2 - static_cast<int>(std::floor(std::log10(std::fabs(value))));
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    double rounded = 0.0;
    parse_double(buf, rounded);
    if (std::fabs(rounded) >= 1.0) {
        std::snprintf(buf, sizeof buf, "%.3f", value);
    } else if (decimals > 3 && std::fabs(rounded) * std::pow(10.0, decimals - 2) >= 10.0) {
        std::snprintf(buf, sizeof buf, "%.*f", decimals - 1, value);
    }
    return buf;
}

std::string format_cell(const CoefCell& cell, Bracket bracket) {
    const double t = cell.std_error > 0.0 ? cell.coef / cell.std_error : 0.0;
    std::string out = format_coefficient(cell.coef);
    out.append(static_cast<std::size_t>(significance_stars(t, cell.dof)), '*');
    char buf[64];
    if (bracket == Bracket::StdError) {
        std::snprintf(buf, sizeof buf, " (%.3f)", cell.std_error);
    } else {
        std::snprintf(buf, sizeof buf, " (%.2f)", t);
    }
    return out + buf;
}

std::string render_coef_table(const CoefTable& table, Bracket bracket) {
    const std::size_t width = std::max<std::size_t>(1, table.sub_columns.size());
    std::string out = table.corner;
    for (const auto& g : table.groups) {
        out += "\t" + g;
        out.append(width - 1, '\t');
    }
    out += "\n";
    if (!table.sub_columns.empty()) {
        for (std::size_t g = 0; g < table.groups.size(); ++g) {
            for (const auto& s : table.sub_columns) {
                out += "\t" + s;
            }
        }
        out += "\n";
    }
    for (std::size_t r = 0; r < table.row_labels.size(); ++r) {
        out += table.row_labels[r];
        for (const auto& cell : table.cells[r]) {
            out += "\t";
            if (cell) {
                out += format_cell(*cell, bracket);
            }
        }
        out += "\n";
    }
    return out;
}

namespace {

std::string row_label(const std::string& regressor) {
    return regressor == "const" ? "constant" : regressor;
}

} // namespace

CoefTable model_table(const var::VarModel& model, const std::vector<std::string>& regressors,
                      const std::vector<std::string>& equations, std::vector<std::string> groups,
                      std::vector<std::string> sub_columns) {
    CoefTable table;
    table.groups = std::move(groups);
    table.sub_columns = std::move(sub_columns);
    for (const auto& reg : regressors) {
        const auto ri = std::find(model.regressor_names.begin(), model.regressor_names.end(), reg);
        if (ri == model.regressor_names.end()) {
            fail(ErrorCode::UnknownVariable, "regressor " + reg);
        }
        const auto row = static_cast<Eigen::Index>(ri - model.regressor_names.begin());
        std::vector<std::optional<CoefCell>> cells;
        for (const auto& eq : equations) {
            const auto ei = std::find(model.names.begin(), model.names.end(), eq);
            if (ei == model.names.end()) {
                cells.emplace_back(); // dropped or absent equation
                continue;
            }
            const auto col = static_cast<Eigen::Index>(ei - model.names.begin());
            cells.push_back(CoefCell{model.coef(row, col), model.std_errors(row, col), static_cast<double>(model.dof)});
        }
        table.row_labels.push_back(row_label(reg));
        table.cells.push_back(std::move(cells));
    }
    return table;
}

std::string coefficient_report(const var::VarModel& model) {
    std::string out = "equation,regressor,coef,std_error,t_stat,p_value,stars,cell\n";
    for (std::size_t i = 0; i < model.names.size(); ++i) {
        for (std::size_t j = 0; j < model.regressor_names.size(); ++j) {
            const auto r = static_cast<Eigen::Index>(j);
            const auto c = static_cast<Eigen::Index>(i);
            const double coef = model.coef(r, c);
            const double se = model.std_errors(r, c);
            const double t = model.t_stats(r, c);
            const double p = stats::student_t_two_sided_p(t, model.dof);
            const int stars = significance_stars(t, model.dof);
            out += model.names[i] + "," + model.regressor_names[j] + "," + format_double(coef) + "," +
                   format_double(se) + "," + format_double(t) + "," + format_double(p) + "," +
                   std::string(static_cast<std::size_t>(stars), '*') + "," +
                   format_cell(CoefCell{coef, se, static_cast<double>(model.dof)}) + "\n";
        }
    }
    return out;
}

std::string render_accuracy_table(const std::vector<AccuracyColumn>& columns) {
    std::string out;
    for (const auto& c : columns) {
        out += "\t" + c.method;
    }
    out += "\n";
    if (columns.empty()) {
        return out;
    }
    for (std::size_t r = 0; r < columns.front().rows.size(); ++r) {
        out += columns.front().rows[r].first;
        for (const auto& c : columns) {
            if (r >= c.rows.size() || c.rows[r].first != columns.front().rows[r].first) {
                fail(ErrorCode::InvariantViolation, "accuracy columns have different bucket rows");
            }
            char buf[32];
            std::snprintf(buf, sizeof buf, "\t%.2f%%", 100.0 * c.rows[r].second);
            out += buf;
        }
        out += "\n";
    }
    return out;
}

} // namespace sentivol::report
