#include "sentivol/surface.hpp"

#include "sentivol/csv.hpp"
#include "sentivol/spline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

namespace sentivol::surface {

GridConfig GridConfig::default7() {
    return GridConfig{};
}

GridConfig GridConfig::paper24() {
    GridConfig c;
    c.moneyness_levels = {1.300, 1.100, 1.025, 0.975, 0.900, 0.600};
    return c;
}

std::size_t IVSurfaceGrid::level_index(double moneyness) const {
    for (std::size_t j = 0; j < moneyness_levels.size(); ++j) {
        if (std::abs(moneyness_levels[j] - moneyness) <= 1e-9) {
            return j;
        }
    }
    fail(ErrorCode::UnknownLevel, "moneyness " + format_double(moneyness) + " is not a grid level");
}

void IVSurfaceGrid::validate(double max_iv) const {
    if (values.size() != maturities_months.size() * moneyness_levels.size()) {
        fail(ErrorCode::SurfaceInvariant, format_date(date) + ": matrix dimensions do not match axes");
    }
    for (double v : values) {
        if (!std::isfinite(v) || !(v > 0.0) || !(v < max_iv)) {
            fail(ErrorCode::SurfaceInvariant, format_date(date) + ": grid value " + format_double(v) +
                                                  " outside (0, " + format_double(max_iv) + ")");
        }
    }
}

namespace {

struct SortedAxis {
    std::vector<double> x;
    std::vector<std::size_t> order; // order[k] = original index of the k-th smallest
};

SortedAxis sort_axis(const std::vector<double>& values) {
    SortedAxis axis;
    axis.order.resize(values.size());
    std::iota(axis.order.begin(), axis.order.end(), std::size_t{0});
    std::sort(axis.order.begin(), axis.order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    for (std::size_t k : axis.order) {
        axis.x.push_back(values[k]);
    }
    return axis;
}

struct ExpirySmile {
    double tau = 0.0;
    std::vector<double> vols_at_levels; // indexed like config.moneyness_levels
};

} // namespace

IVSurfaceGrid build_grid_from_points(Date date, const std::vector<IVPoint>& points, const GridConfig& config,
                                     BuildDiagnostics* diagnostics) {
    // Group by expiry; taus computed from the same dates compare equal exactly.
    std::map<double, std::map<double, double>> by_tau;
    for (const auto& p : points) {
        by_tau[p.tau][p.moneyness] = p.iv;
    }
    std::vector<ExpirySmile> smiles;
    int dropped = 0;
    for (const auto& [tau, smile] : by_tau) {
        if (static_cast<int>(smile.size()) < config.min_strikes_per_expiry) {
            ++dropped;
            continue;
        }
        std::vector<double> m;
        std::vector<double> iv;
        for (const auto& [mk, v] : smile) {
            m.push_back(mk);
            iv.push_back(v);
        }
        const CubicSpline spline(m, iv, CubicSpline::Extrapolation::Clamp);
        ExpirySmile es;
        es.tau = tau;
        for (double level : config.moneyness_levels) {
            es.vols_at_levels.push_back(spline(level));
        }
        smiles.push_back(std::move(es));
    }
    if (diagnostics != nullptr) {
        diagnostics->expiries_used = static_cast<int>(smiles.size());
        diagnostics->expiries_dropped = dropped;
    }
    if (smiles.size() < 2) {
        fail(ErrorCode::InsufficientQuotes, format_date(date) + ": need >= 2 expiries with >= " +
                                                std::to_string(config.min_strikes_per_expiry) + " strikes, have " +
                                                std::to_string(smiles.size()));
    }

    IVSurfaceGrid grid;
    grid.date = date;
    grid.maturities_months = config.maturities_months;
    grid.moneyness_levels = config.moneyness_levels;
    grid.values.assign(config.maturities_months.size() * config.moneyness_levels.size(), 0.0);
    const std::size_t n_levels = config.moneyness_levels.size();

    for (std::size_t i = 0; i < config.maturities_months.size(); ++i) {
        const double tau = config.maturities_months[i] / 12.0;
        const auto upper = std::find_if(smiles.begin(), smiles.end(), [&](const ExpirySmile& s) { return s.tau >= tau; });
        const ExpirySmile* exact = nullptr;
        if (upper != smiles.end() && std::abs(upper->tau - tau) <= 1e-12) {
            exact = &*upper;
        } else if (upper == smiles.begin()) {
            exact = &smiles.front();
        } else if (upper == smiles.end()) {
            exact = &smiles.back();
        }
        for (std::size_t j = 0; j < n_levels; ++j) {
            if (exact != nullptr) {
                grid.at(i, j) = exact->vols_at_levels[j];
                continue;
            }
            const ExpirySmile& a = *(upper - 1);
            const ExpirySmile& b = *upper;
            const double wa = a.vols_at_levels[j] * a.vols_at_levels[j] * a.tau;
            const double wb = b.vols_at_levels[j] * b.vols_at_levels[j] * b.tau;
            const double w = wa + (wb - wa) * (tau - a.tau) / (b.tau - a.tau);
            grid.at(i, j) = std::sqrt(w / tau);
        }
    }
    grid.validate(config.max_iv);
    return grid;
}

BuildResult build_grid(const std::vector<io::OptionQuote>& quotes, double rate, const GridConfig& config) {
    if (quotes.empty()) {
        fail(ErrorCode::InsufficientQuotes, "no quotes");
    }
    const Date date = quotes.front().trade_date;
    for (const auto& q : quotes) {
        if (q.trade_date != date) {
            fail(ErrorCode::InvariantViolation, "quotes span several trade dates");
        }
    }

    // One quote per (expiry, strike), chosen by side policy.
    std::map<std::pair<Date, double>, std::pair<const io::OptionQuote*, const io::OptionQuote*>> by_contract;
    for (const auto& q : quotes) {
        auto& slot = by_contract[{q.expiry_date, q.strike}];
        (q.kind == OptionKind::Call ? slot.first : slot.second) = &q;
    }

    BuildResult result;
    for (const auto& [key, pair] : by_contract) {
        const auto [call, put] = pair;
        const io::OptionQuote* chosen = nullptr;
        switch (config.side) {
        case SidePolicy::CallsOnly:
            chosen = call;
            break;
        case SidePolicy::PutsOnly:
            chosen = put;
            break;
        case SidePolicy::OutOfTheMoney: {
            const io::OptionQuote* any = call != nullptr ? call : put;
            const bool call_side = any->strike / any->underlying_price >= 1.0;
            chosen = call_side ? (call != nullptr ? call : put) : (put != nullptr ? put : call);
            break;
        }
        }
        if (chosen == nullptr) {
            continue;
        }
        ++result.diagnostics.quotes_considered;
        const double tau = year_fraction(chosen->trade_date, chosen->expiry_date);
        try {
            const double iv = implied_vol(chosen->price, chosen->underlying_price, chosen->strike, rate, tau,
                                          chosen->kind, config.inversion);
            result.points.push_back(IVPoint{tau, chosen->strike / chosen->underlying_price, iv});
        } catch (const Error&) {
            ++result.diagnostics.inversion_failures;
        }
    }
    if (result.points.empty()) {
        fail(ErrorCode::AllInversionsFailed,
             format_date(date) + ": " + std::to_string(result.diagnostics.quotes_considered) + " quotes, none inverted");
    }
    result.grid = build_grid_from_points(date, result.points, config, &result.diagnostics);
    return result;
}

double interpolate(const IVSurfaceGrid& surface, double tau, double moneyness, bool allow_extrapolation) {
    const SortedAxis levels = sort_axis(surface.moneyness_levels);
    std::vector<double> taus;
    for (std::size_t i = 0; i < surface.maturities_months.size(); ++i) {
        taus.push_back(surface.tau(i));
    }
    if (!allow_extrapolation) {
        if (tau < taus.front() || tau > taus.back() || moneyness < levels.x.front() || moneyness > levels.x.back()) {
            fail(ErrorCode::OutOfHull, "query (" + format_double(tau) + ", " + format_double(moneyness) +
                                           ") outside the grid");
        }
    }
    std::vector<double> row_values;
    row_values.reserve(taus.size());
    std::vector<double> row(levels.x.size());
    for (std::size_t i = 0; i < taus.size(); ++i) {
        for (std::size_t k = 0; k < levels.order.size(); ++k) {
            row[k] = surface.at(i, levels.order[k]);
        }
        row_values.push_back(CubicSpline(levels.x, row)(moneyness));
    }
    if (taus.size() == 1) {
        return row_values.front();
    }
    return CubicSpline(taus, row_values)(tau);
}

double smile_curvature(std::span<const double> strikes, std::span<const double> ivs, CurvatureVariant variant) {
    const std::size_t n = ivs.size();
    if (n < 3 || strikes.size() != n) {
        fail(ErrorCode::TooFewPoints, "curvature needs >= 3 (strike, iv) pairs");
    }
    const double dk = strikes[1] - strikes[0];
    if (!(dk > 0.0)) {
        fail(ErrorCode::NonUniformSpacing, "strikes must be strictly increasing");
    }
    for (std::size_t i = 1; i < n; ++i) {
        const double step = strikes[i] - strikes[i - 1];
        if (!(step > 0.0) || std::abs(step - dk) > 1e-9 * std::abs(dk)) {
            fail(ErrorCode::NonUniformSpacing, "strike spacing is not uniform");
        }
    }
    double sum = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double second = ivs[i - 1] + ivs[i + 1] - 2.0 * ivs[i];
        const double slope = (ivs[i + 1] - ivs[i - 1]) / (2.0 * dk);
        const double base = variant == CurvatureVariant::Standard ? 1.0 + slope * slope : 1.0 + slope;
        sum += second / (dk * dk * std::pow(base, 1.5));
    }
    const double denom = variant == CurvatureVariant::Standard ? static_cast<double>(n - 2) : static_cast<double>(n);
    return sum / denom;
}

double smile_skewness(std::span<const double> ivs) {
    const std::size_t n = ivs.size();
    if (n < 3) {
        fail(ErrorCode::TooFewPoints, "skewness needs >= 3 points");
    }
    const double mean = std::accumulate(ivs.begin(), ivs.end(), 0.0) / static_cast<double>(n);
    double m2 = 0.0;
    double m3 = 0.0;
    for (double v : ivs) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    const double scale = std::max(std::abs(mean), std::numeric_limits<double>::min());
    if (!(std::sqrt(m2) > 1e-12 * scale)) {
        fail(ErrorCode::DegenerateSmile, "smile has zero variance");
    }
    return m3 / std::pow(m2, 1.5);
}

double term_slope(const IVSurfaceGrid& surface, double moneyness) {
    const std::size_t j = surface.level_index(moneyness);
    const std::size_t n = surface.maturities_months.size();
    if (n < 2) {
        fail(ErrorCode::TooFewPoints, "term slope needs >= 2 maturities");
    }
    double tau_mean = 0.0;
    double iv_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        tau_mean += surface.tau(i);
        iv_mean += surface.at(i, j);
    }
    tau_mean /= static_cast<double>(n);
    iv_mean /= static_cast<double>(n);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = surface.tau(i) - tau_mean;
        sxy += dx * (surface.at(i, j) - iv_mean);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

std::vector<double> SurfaceParamVector::flatten() const {
    std::vector<double> out(skew_by_tau);
    out.insert(out.end(), cur_by_tau.begin(), cur_by_tau.end());
    out.insert(out.end(), slope_by_m.begin(), slope_by_m.end());
    return out;
}

SurfaceParamVector surface_params(const IVSurfaceGrid& surface, const ParamConfig& config) {
    const SortedAxis levels = sort_axis(surface.moneyness_levels);
    if (config.ladder_low < levels.x.front() - 1e-12 || config.ladder_high > levels.x.back() + 1e-12) {
        fail(ErrorCode::OutOfHull, "curvature ladder extends beyond the grid moneyness levels");
    }
    std::vector<double> ladder;
    const auto steps = static_cast<int>(std::lround((config.ladder_high - config.ladder_low) / config.ladder_step));
    for (int k = 0; k <= steps; ++k) {
        ladder.push_back(config.ladder_low + k * config.ladder_step);
    }

    SurfaceParamVector out;
    out.date = surface.date;
    std::vector<double> row(levels.x.size());
    std::vector<double> smile(ladder.size());
    for (std::size_t i = 0; i < surface.maturities_months.size(); ++i) {
        for (std::size_t k = 0; k < levels.order.size(); ++k) {
            row[k] = surface.at(i, levels.order[k]);
        }
        const CubicSpline spline(levels.x, row);
        for (std::size_t k = 0; k < ladder.size(); ++k) {
            smile[k] = spline(ladder[k]);
        }
        try {
            out.skew_by_tau.push_back(smile_skewness(smile));
            out.degenerate_rows.push_back(false);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateSmile) {
                throw;
            }
            out.skew_by_tau.push_back(0.0);
            out.degenerate_rows.push_back(true);
        }
        out.cur_by_tau.push_back(smile_curvature(ladder, smile, config.curvature));
    }
    for (double level : surface.moneyness_levels) {
        out.slope_by_m.push_back(term_slope(surface, level));
    }
    return out;
}

std::string maturity_label(int months) {
    return std::to_string(months) + "m";
}

std::string level_label(double moneyness) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04ld", std::lround(moneyness * 1000.0));
    return buf;
}

std::vector<std::string> param_names(const std::vector<int>& maturities_months,
                                     const std::vector<double>& moneyness_levels) {
    std::vector<std::string> names;
    for (int m : maturities_months) {
        names.push_back("skew_" + maturity_label(m));
    }
    for (int m : maturities_months) {
        names.push_back("cur_" + maturity_label(m));
    }
    for (double k : moneyness_levels) {
        names.push_back("slope_" + level_label(k));
    }
    return names;
}

std::string write_surface_csv(const std::vector<IVSurfaceGrid>& surfaces) {
    std::string out = "date,tau_months,moneyness,iv\n";
    for (const auto& s : surfaces) {
        for (std::size_t i = 0; i < s.maturities_months.size(); ++i) {
            for (std::size_t j = 0; j < s.moneyness_levels.size(); ++j) {
                out += format_date(s.date) + "," + std::to_string(s.maturities_months[i]) + "," +
                       format_double(s.moneyness_levels[j]) + "," + format_double(s.at(i, j)) + "\n";
            }
        }
    }
    return out;
}

std::vector<IVSurfaceGrid> read_surface_csv(const std::filesystem::path& path) {
    const CsvTable table = read_csv(path);
    const std::size_t c_date = table.require_column("date");
    const std::size_t c_tau = table.require_column("tau_months");
    const std::size_t c_m = table.require_column("moneyness");
    const std::size_t c_iv = table.require_column("iv");

    std::vector<IVSurfaceGrid> out;
    std::vector<std::tuple<int, double, double>> cells;
    auto flush = [&](Date date) {
        IVSurfaceGrid g;
        g.date = date;
        for (const auto& [tau, m, iv] : cells) {
            if (std::find(g.maturities_months.begin(), g.maturities_months.end(), tau) == g.maturities_months.end()) {
                g.maturities_months.push_back(tau);
            }
            if (std::find(g.moneyness_levels.begin(), g.moneyness_levels.end(), m) == g.moneyness_levels.end()) {
                g.moneyness_levels.push_back(m);
            }
        }
        if (g.maturities_months.size() * g.moneyness_levels.size() != cells.size()) {
            fail(ErrorCode::SchemaMismatch, path.string() + ": incomplete grid on " + format_date(date));
        }
        for (const auto& [tau, m, iv] : cells) {
            g.values.push_back(iv);
        }
        out.push_back(std::move(g));
        cells.clear();
    };

    std::optional<Date> current;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const auto d = parse_date(row[c_date]);
        long long tau = 0;
        double m = 0.0;
        double iv = 0.0;
        if (!d || !parse_long(row[c_tau], tau) || !parse_double(row[c_m], m) || !parse_double(row[c_iv], iv)) {
            fail(ErrorCode::UnparsableValue, path.string() + " line " + std::to_string(table.line_numbers[r]));
        }
        if (current && *d != *current) {
            if (*d < *current) {
                fail(ErrorCode::InvariantViolation, path.string() + ": dates not increasing");
            }
            flush(*current);
        }
        current = *d;
        cells.emplace_back(static_cast<int>(tau), m, iv);
    }
    if (current) {
        flush(*current);
    }
    return out;
}

std::string write_params_csv(const std::vector<SurfaceParamVector>& params, const std::vector<int>& maturities_months,
                             const std::vector<double>& moneyness_levels) {
    std::string out = "date";
    for (const auto& name : param_names(maturities_months, moneyness_levels)) {
        out += "," + name;
    }
    out += "\n";
    for (const auto& p : params) {
        out += format_date(p.date);
        for (double v : p.flatten()) {
            out += "," + format_double(v);
        }
        out += "\n";
    }
    return out;
}

} // namespace sentivol::surface
