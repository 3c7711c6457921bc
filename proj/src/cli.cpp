#include "sentivol/cli.hpp"

#include "sentivol/csv.hpp"
#include "sentivol/data_io.hpp"
#include "sentivol/decompose.hpp"
#include "sentivol/error.hpp"
#include "sentivol/evaluate.hpp"
#include "sentivol/report.hpp"
#include "sentivol/sentiment.hpp"
#include "sentivol/surface.hpp"
#include "sentivol/svg.hpp"
#include "sentivol/synthgen.hpp"
#include "sentivol/varfit.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

namespace sentivol::cli {

namespace {

struct KeySpec {
    const char* key;
    const char* value;
    const char* doc;
};

// Every recognised key, in print order.
const std::vector<KeySpec>& key_specs() {
    static const std::vector<KeySpec> specs{
        {"run.seed", "1", "seed for generators and every stochastic step"},
        {"run.out", "out", "output directory (not part of the config hash)"},
        {"input.quotes", "quotes.csv", "option quotes: trade_date, expiry_date, strike, kind, price, underlying_price"},
        {"input.rates", "rates.csv", "risk-free rates: date, rate"},
        {"input.proxies", "proxies.csv", "sentiment proxies: date, n_up, n_down, volume, float_cap, cef_nav, cef_price"},
        {"input.holidays", "", "optional holiday list (date); weekends are always closed"},
        {"surface.grid", "default7", "default7 (seven moneyness levels) or paper24 (six levels)"},
        {"surface.side", "otm", "otm, calls or puts"},
        {"surface.min_days_to_expiry", "5", "drop quotes with fewer trading days to expiry"},
        {"surface.max_iv", "5", "upper bound for valid grid values"},
        {"surface.curvature", "standard", "standard or paper-literal smile-curvature variant"},
        {"sentiment.method", "pca", "sentiment used by decompose, var-fit, var-irf, granger, forecast, robustness: pca or an [external] label"},
        {"decompose.method", "fft", "fft, emd or ma"},
        {"decompose.cutoff_period", "15", "fft: periods below this many observations are high frequency; auto picks the spectral minimum in 10..30"},
        {"decompose.extreme_low_period", "", "fft: optional period for the extreme-low band report"},
        {"decompose.emd_k", "4", "emd: leading IMFs forming the high-frequency part, or auto"},
        {"decompose.emd_max_imf", "10", "emd: maximum number of IMFs"},
        {"decompose.ma_window", "22", "ma: trailing window of the low-frequency mean"},
        {"var.form", "nonparameter", "nonparameter (selected grid points) or parameter (skew, curvature, slope)"},
        {"var.levels", "1.300,0.975,0.600", "moneyness levels of the nonparameter state"},
        {"var.lags", "auto", "fixed lag order or auto (AIC)"},
        {"var.max_lags", "8", "largest lag order tried by auto"},
        {"var.exog", "", "contemporaneous exogenous columns: any of spot, rate"},
        {"var.irf_horizon", "20", "impulse-response horizon"},
        {"var.orthogonalized", "false", "Cholesky-orthogonalized responses instead of unit shocks"},
        {"evaluate.methods", "none,pca", "compared methods: none, random_walk, pca, or [external] labels"},
        {"evaluate.window", "500", "rolling estimation window (trading days)"},
        {"evaluate.step", "1", "rows between forecasts"},
        {"evaluate.expanding", "false", "expanding instead of fixed-length window"},
        {"evaluate.min_window", "250", "smallest accepted estimation window"},
        {"evaluate.min_forecasts", "30", "smallest accepted number of forecast days"},
        {"robustness.windows", "halves", "halves, or comma-separated first:last date ranges"},
        {"generate.scenario", "planted", "flat, smirk, planted or var"},
        {"generate.horizon", "2000", "trading days to generate"},
        {"generate.start", "2015-01-01", "first calendar date"},
        {"generate.vol_level", "0.2", "flat and smirk: base volatility"},
        {"generate.smirk_slope", "0.3", "smirk: sigma = level + slope * (1 - K/S)+"},
        {"generate.loading", "0.3", "planted: high-frequency sentiment loading on next-day at-the-money vol"},
    };
    return specs;
}

bool known_key(const std::string& key) {
    const auto& specs = key_specs();
    return std::any_of(specs.begin(), specs.end(), [&](const KeySpec& s) { return key == s.key; });
}

std::vector<std::string> split_list(const std::string& text, char sep = ',') {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) {
            out.push_back(item.substr(b, e - b + 1));
        }
    }
    return out;
}

int to_int(const RunConfig& c, const std::string& key) {
    long long v = 0;
    if (!parse_long(c.get(key), v)) {
        fail(ErrorCode::ConfigError, key + " = '" + c.get(key) + "' is not an integer");
    }
    return static_cast<int>(v);
}

double to_double(const RunConfig& c, const std::string& key) {
    double v = 0.0;
    if (!parse_double(c.get(key), v)) {
        fail(ErrorCode::ConfigError, key + " = '" + c.get(key) + "' is not a number");
    }
    return v;
}

bool to_bool(const RunConfig& c, const std::string& key) {
    const std::string& v = c.get(key);
    if (v == "true" || v == "1" || v == "yes") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no") {
        return false;
    }
    fail(ErrorCode::ConfigError, key + " = '" + v + "' is not a boolean");
}

Date to_date(const std::string& text, const std::string& what) {
    const auto d = parse_date(text);
    if (!d) {
        fail(ErrorCode::ConfigError, what + " = '" + text + "' is not a YYYY-MM-DD date");
    }
    return *d;
}

} // namespace

const std::string& RunConfig::get(const std::string& key) const {
    const auto it = values.find(key);
    if (it == values.end()) {
        fail(ErrorCode::ConfigError, "unknown key " + key);
    }
    return it->second;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    if (!known_key(key)) {
        fail(ErrorCode::ConfigError, "unknown key " + key);
    }
    values[key] = value;
}

std::filesystem::path RunConfig::path(const std::string& key) const {
    const std::filesystem::path p = get(key);
    return p.is_absolute() ? p : base_dir / p;
}

RunConfig default_config() {
    RunConfig c;
    for (const auto& s : key_specs()) {
        c.values[s.key] = s.value;
    }
    return c;
}

RunConfig parse_config(std::string_view ini_text, const std::filesystem::path& base_dir) {
    RunConfig c = default_config();
    c.base_dir = base_dir;
    boost::property_tree::ptree tree;
    try {
        std::istringstream in{std::string(ini_text)};
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        fail(ErrorCode::ConfigError, std::string("config: ") + e.message() + " at line " + std::to_string(e.line()));
    }
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty()) {
            fail(ErrorCode::ConfigError, "key '" + section + "' outside a section");
        }
        for (const auto& [key, value] : body) {
            if (section == "external") {
                c.external[key] = value.data();
            } else {
                c.set(section + "." + key, value.data());
            }
        }
    }
    return c;
}

std::string print_config(const RunConfig& config) {
    std::string out = "# " + std::string(kToolVersion) + " effective configuration\n";
    std::string section;
    for (const auto& s : key_specs()) {
        const std::string key = s.key;
        const auto dot = key.find('.');
        if (key.substr(0, dot) != section) {
            section = key.substr(0, dot);
            out += "\n[" + section + "]\n";
        }
        out += "; " + std::string(s.doc) + "\n" + key.substr(dot + 1) + " = " + config.get(key) + "\n";
    }
    out += "\n[external]\n; label = path of a date,score,n_texts sentiment file\n";
    for (const auto& [label, path] : config.external) {
        out += label + " = " + path + "\n";
    }
    return out;
}

std::string config_hash(const RunConfig& config) {
    RunConfig copy = config;
    copy.values["run.out"] = "";
    return fnv1a_hex(print_config(copy));
}

namespace {

// ---------------------------------------------------------------- artifacts

struct Artifacts {
    std::vector<std::pair<std::string, std::string>> files; // name, content
    std::vector<std::string> warnings;
    std::vector<std::pair<std::string, std::string>> metadata;

    std::string csv_header() const {
        std::string out;
        for (const auto& [k, v] : metadata) {
            out += "# " + k + ": " + v + "\n";
        }
        return out;
    }
    void add_text(const std::string& name, const std::string& body) { files.emplace_back(name, csv_header() + body); }
    void add_raw(const std::string& name, const std::string& body) { files.emplace_back(name, body); }
    void add_svg(const std::string& name, svg::Figure figure) {
        figure.metadata = metadata;
        files.emplace_back(name, svg::render(figure));
    }
    void add_json(const std::string& name, const std::string& json_text) {
        auto j = nlohmann::ordered_json::parse(json_text);
        nlohmann::ordered_json meta;
        for (const auto& [k, v] : metadata) {
            meta[k] = v;
        }
        nlohmann::ordered_json out;
        out["metadata"] = meta;
        for (auto it = j.begin(); it != j.end(); ++it) {
            out[it.key()] = it.value();
        }
        files.emplace_back(name, out.dump(2) + "\n");
    }
};

void set_metadata(Artifacts& a, const RunConfig& c, const std::string& command, const std::vector<Date>& dates) {
    a.metadata = {{"tool", kToolVersion},
                  {"command", command},
                  {"config_hash", config_hash(c)},
                  {"seed", c.get("run.seed")},
                  {"date_range", dates.empty() ? std::string("none")
                                               : format_date(dates.front()) + ".." + format_date(dates.back())}};
}

// ----------------------------------------------------------------- surfaces

surface::GridConfig grid_config(const RunConfig& c) {
    const std::string& g = c.get("surface.grid");
    surface::GridConfig grid;
    if (g == "default7") {
        grid = surface::GridConfig::default7();
    } else if (g == "paper24") {
        grid = surface::GridConfig::paper24();
    } else {
        fail(ErrorCode::ConfigError, "surface.grid must be default7 or paper24");
    }
    const std::string& side = c.get("surface.side");
    if (side == "otm") {
        grid.side = surface::SidePolicy::OutOfTheMoney;
    } else if (side == "calls") {
        grid.side = surface::SidePolicy::CallsOnly;
    } else if (side == "puts") {
        grid.side = surface::SidePolicy::PutsOnly;
    } else {
        fail(ErrorCode::ConfigError, "surface.side must be otm, calls or puts");
    }
    grid.max_iv = to_double(c, "surface.max_iv");
    return grid;
}

surface::ParamConfig param_config(const RunConfig& c) {
    surface::ParamConfig p;
    const std::string& v = c.get("surface.curvature");
    if (v == "standard") {
        p.curvature = surface::CurvatureVariant::Standard;
    } else if (v == "paper-literal") {
        p.curvature = surface::CurvatureVariant::PaperLiteral;
    } else {
        fail(ErrorCode::ConfigError, "surface.curvature must be standard or paper-literal");
    }
    return p;
}

struct SurfaceData {
    std::vector<surface::IVSurfaceGrid> grids;
    std::vector<surface::BuildDiagnostics> diagnostics;
    std::vector<double> spots;
    std::vector<double> rates;
    std::vector<io::RowReject> rejects;
};

// Referenced inputs must exist before anything is read.
std::filesystem::path require_file(const std::filesystem::path& p, const std::string& what) {
    if (!std::filesystem::is_regular_file(p)) {
        fail(ErrorCode::MissingFile, what + " file not found: " + p.string());
    }
    return p;
}

SurfaceData load_surfaces(const RunConfig& c, Artifacts& a) {
    const surface::GridConfig grid = grid_config(c);
    require_file(c.path("input.quotes"), "input.quotes");
    require_file(c.path("input.rates"), "input.rates");
    if (!c.get("input.holidays").empty()) {
        require_file(c.path("input.holidays"), "input.holidays");
    }
    const auto loaded = io::load_option_quotes(c.path("input.quotes"));
    const auto rates = io::load_rates(c.path("input.rates"));
    const TradingCalendar calendar =
        c.get("input.holidays").empty() ? TradingCalendar{} : load_calendar(c.path("input.holidays"));
    const auto quotes = io::filter_quotes(loaded.quotes, calendar, to_int(c, "surface.min_days_to_expiry"));

    std::map<Date, double> rate_by_date;
    for (const auto& r : rates) {
        rate_by_date[r.date] = r.rate;
    }
    std::map<Date, std::vector<io::OptionQuote>> by_date;
    for (const auto& q : quotes) {
        by_date[q.trade_date].push_back(q);
    }

    SurfaceData data;
    data.rejects = loaded.rejects;
    if (!loaded.rejects.empty()) {
        a.warnings.push_back(std::to_string(loaded.rejects.size()) + " quote rows rejected");
    }
    int skipped = 0;
    std::optional<ErrorCode> first_failure;
    for (const auto& [date, day_quotes] : by_date) {
        const auto rate = rate_by_date.find(date);
        if (rate == rate_by_date.end()) {
            a.warnings.push_back(format_date(date) + ": no rate, date skipped");
            ++skipped;
            continue;
        }
        try {
            auto built = surface::build_grid(day_quotes, rate->second, grid);
            data.grids.push_back(std::move(built.grid));
            data.diagnostics.push_back(built.diagnostics);
            data.spots.push_back(day_quotes.front().underlying_price);
            data.rates.push_back(rate->second);
        } catch (const Error& e) {
            if (e.category() == ErrorCategory::Config) {
                throw;
            }
            a.warnings.push_back(format_date(date) + ": " + e.what());
            first_failure = first_failure.value_or(e.code());
            ++skipped;
        }
    }
    if (data.grids.empty()) {
        // With no usable date, the first date failure decides the category.
        fail(first_failure.value_or(ErrorCode::InsufficientQuotes),
             "no trade date produced a surface" + (a.warnings.empty() ? std::string() : "; " + a.warnings.front()));
    }
    return data;
}

// ---------------------------------------------------------------- sentiment

SentimentSeries load_sentiment(const RunConfig& c, const std::string& label, sentiment::CompositeResult* pca) {
    if (label == "pca") {
        const auto proxies = io::load_proxies(require_file(c.path("input.proxies"), "input.proxies"));
        auto composite = sentiment::composite_index(sentiment::proxy_columns(proxies));
        if (pca != nullptr) {
            *pca = composite;
        }
        return composite.index;
    }
    const auto it = c.external.find(label);
    if (it == c.external.end()) {
        fail(ErrorCode::ConfigError, "sentiment '" + label + "' is neither pca nor an [external] label");
    }
    const std::filesystem::path p = it->second;
    SentimentSeries s =
        sentiment::load_external_scores(require_file(p.is_absolute() ? p : c.base_dir / p, "external " + label));
    s.label = label;
    return s;
}

struct Decomposed {
    decompose::DecompositionResult result;
    std::optional<decompose::ImfSet> imfs;
};

Decomposed decompose_series(const RunConfig& c, const SentimentSeries& s) {
    const std::string& method = c.get("decompose.method");
    Decomposed out;
    if (method == "fft") {
        decompose::FftConfig cfg;
        if (c.get("decompose.cutoff_period") == "auto") {
            cfg.auto_cutoff = true;
        } else {
            cfg.cutoff_period = to_double(c, "decompose.cutoff_period");
        }
        if (!c.get("decompose.extreme_low_period").empty()) {
            cfg.extreme_low_period = to_double(c, "decompose.extreme_low_period");
        }
        out.result = decompose::fft_split(s, cfg);
    } else if (method == "emd") {
        decompose::EmdConfig cfg;
        cfg.max_imf = to_int(c, "decompose.emd_max_imf");
        out.imfs = decompose::emd(s, cfg);
        const std::optional<int> k =
            c.get("decompose.emd_k") == "auto" ? std::nullopt : std::optional(to_int(c, "decompose.emd_k"));
        out.result = decompose::emd_split(*out.imfs, k);
    } else if (method == "ma") {
        out.result = decompose::ma_split(s, to_int(c, "decompose.ma_window"));
    } else {
        fail(ErrorCode::ConfigError, "decompose.method must be fft, emd or ma");
    }
    out.result.hfs.label = s.label + ":hfs";
    out.result.lfs.label = s.label + ":lfs";
    return out;
}

Series restrict_to(const Series& s, const std::vector<Date>& dates) {
    Series out;
    out.label = s.label;
    std::size_t j = 0;
    for (Date d : dates) {
        while (j < s.dates.size() && s.dates[j] < d) {
            ++j;
        }
        if (j == s.dates.size() || s.dates[j] != d) {
            fail(ErrorCode::MisalignedDates, s.label + " lacks " + format_date(d));
        }
        out.dates.push_back(d);
        out.values.push_back(s.values[j]);
    }
    return out;
}

// ------------------------------------------------------------------ dataset

struct Dataset {
    SurfaceData surfaces; // aligned to `dates`
    std::vector<Date> dates;
    var::StatePanel surface_panel; // surface variables only
    std::optional<var::StatePanel> exog;
    std::vector<std::pair<std::string, SentimentSeries>> sentiments; // aligned
    std::vector<std::pair<std::string, Decomposed>> decompositions;
};

bool is_baseline(const std::string& method) {
    return method == "none" || method == "random_walk";
}

Dataset build_dataset(const RunConfig& c, const std::vector<std::string>& sentiment_labels, Artifacts& a) {
    Dataset d;
    SurfaceData all = load_surfaces(c, a);

    std::vector<Series> inputs;
    Series surface_dates{"surfaces", {}, {}};
    for (const auto& g : all.grids) {
        surface_dates.dates.push_back(g.date);
        surface_dates.values.push_back(0.0);
    }
    inputs.push_back(surface_dates);
    for (const auto& label : sentiment_labels) {
        d.sentiments.emplace_back(label, load_sentiment(c, label, nullptr));
        inputs.push_back(d.sentiments.back().second);
    }
    const io::AlignedPanel aligned = io::align_calendar(inputs);
    for (const auto& [label, dropped] : aligned.dropped) {
        if (!dropped.empty()) {
            a.warnings.push_back(label + ": " + std::to_string(dropped.size()) + " dates outside the common calendar");
        }
    }
    d.dates = aligned.dates;

    std::size_t j = 0;
    for (Date date : d.dates) {
        while (all.grids[j].date < date) {
            ++j;
        }
        d.surfaces.grids.push_back(all.grids[j]);
        d.surfaces.diagnostics.push_back(all.diagnostics[j]);
        d.surfaces.spots.push_back(all.spots[j]);
        d.surfaces.rates.push_back(all.rates[j]);
    }
    d.surfaces.rejects = all.rejects;
    for (auto& [label, s] : d.sentiments) {
        s = restrict_to(s, d.dates);
        d.decompositions.emplace_back(label, decompose_series(c, s));
    }

    const std::string& form = c.get("var.form");
    if (form == "nonparameter") {
        var::Selection sel;
        sel.maturities_months = d.surfaces.grids.front().maturities_months;
        sel.moneyness_levels.clear();
        for (const auto& level : split_list(c.get("var.levels"))) {
            double v = 0.0;
            if (!parse_double(level, v)) {
                fail(ErrorCode::ConfigError, "var.levels entry '" + level + "' is not a number");
            }
            sel.moneyness_levels.push_back(v);
        }
        d.surface_panel = var::build_state_panel(d.surfaces.grids, nullptr, nullptr, sel);
    } else if (form == "parameter") {
        const auto pc = param_config(c);
        std::vector<surface::SurfaceParamVector> params;
        for (const auto& g : d.surfaces.grids) {
            params.push_back(surface::surface_params(g, pc));
        }
        const auto& g0 = d.surfaces.grids.front();
        d.surface_panel = var::build_state_panel(params, g0.maturities_months, g0.moneyness_levels, nullptr, nullptr);
    } else {
        fail(ErrorCode::ConfigError, "var.form must be nonparameter or parameter");
    }

    const auto exog_names = split_list(c.get("var.exog"));
    if (!exog_names.empty()) {
        var::StatePanel x;
        x.dates = d.dates;
        x.names = exog_names;
        x.values.resize(static_cast<Eigen::Index>(d.dates.size()), static_cast<Eigen::Index>(exog_names.size()));
        for (std::size_t k = 0; k < exog_names.size(); ++k) {
            const auto& src = exog_names[k] == "spot"   ? d.surfaces.spots
                              : exog_names[k] == "rate" ? d.surfaces.rates
                                                        : (fail(ErrorCode::ConfigError,
                                                                "var.exog entries must be spot or rate"),
                                                           d.surfaces.spots);
            for (std::size_t t = 0; t < src.size(); ++t) {
                x.values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k)) = src[t];
            }
        }
        d.exog = std::move(x);
    }
    return d;
}

var::StatePanel with_sentiment(const var::StatePanel& surface, const decompose::DecompositionResult& split) {
    var::StatePanel panel = surface;
    panel.names.push_back("hfs");
    panel.names.push_back("lfs");
    const auto rows = surface.rows();
    panel.values.conservativeResize(Eigen::NoChange, surface.cols() + 2);
    panel.values.col(surface.cols()) = Eigen::Map<const Eigen::VectorXd>(split.hfs.values.data(), rows);
    panel.values.col(surface.cols() + 1) = Eigen::Map<const Eigen::VectorXd>(split.lfs.values.data(), rows);
    return panel;
}

int resolve_lags(const RunConfig& c, const var::StatePanel& panel, const var::StatePanel* exog, Artifacts* a) {
    if (c.get("var.lags") != "auto") {
        return to_int(c, "var.lags");
    }
    const auto sel = var::select_lag(panel, to_int(c, "var.max_lags"), exog);
    if (a != nullptr) {
        std::string csv = "p,aic\n";
        for (std::size_t i = 0; i < sel.aic.size(); ++i) {
            csv += std::to_string(i + 1) + "," + format_double(sel.aic[i]) + "\n";
        }
        a->add_text("lag_selection.csv", csv);
    }
    return sel.p;
}

std::optional<int> fixed_lags(const RunConfig& c) {
    return c.get("var.lags") == "auto" ? std::nullopt : std::optional(to_int(c, "var.lags"));
}

evaluate::RollingConfig rolling_config(const RunConfig& c) {
    evaluate::RollingConfig r;
    r.initial_window = to_int(c, "evaluate.window");
    r.step = to_int(c, "evaluate.step");
    r.expanding = to_bool(c, "evaluate.expanding");
    r.min_window = to_int(c, "evaluate.min_window");
    r.min_forecasts = to_int(c, "evaluate.min_forecasts");
    return r;
}

// ------------------------------------------------------------------- charts

svg::Figure surface_figure(const surface::IVSurfaceGrid& g) {
    svg::Figure f;
    f.title = "Implied volatility surface " + format_date(g.date);
    svg::Panel p{"Smile by maturity", "moneyness K/S", "implied vol", {}};
    for (std::size_t i = 0; i < g.maturities_months.size(); ++i) {
        svg::Line line{surface::maturity_label(g.maturities_months[i]), {}, {}, false, true};
        std::vector<std::pair<double, double>> pts;
        for (std::size_t j = 0; j < g.moneyness_levels.size(); ++j) {
            pts.emplace_back(g.moneyness_levels[j], g.at(i, j));
        }
        std::sort(pts.begin(), pts.end());
        for (const auto& [x, y] : pts) {
            line.x.push_back(x);
            line.y.push_back(y);
        }
        p.lines.push_back(std::move(line));
    }
    f.panels.push_back(std::move(p));
    f.panel_width = 520;
    f.panel_height = 340;
    return f;
}

svg::Figure smirk_figure(const std::vector<std::pair<std::string, std::vector<evaluate::ForecastRecord>>>& forecasts) {
    svg::Figure f;
    f.columns = 2;
    if (forecasts.empty() || forecasts.front().second.empty()) {
        return f;
    }
    const Date last = forecasts.front().second.back().date;
    f.title = "Predicted and realized smirk " + format_date(last);
    std::set<int> maturities;
    for (const auto& r : forecasts.front().second) {
        if (auto m = evaluate::maturity_of(r.variable)) {
            maturities.insert(*m);
        }
    }
    for (int months : maturities) {
        svg::Panel p{surface::maturity_label(months), "moneyness K/S", "implied vol", {}};
        bool realized_added = false;
        for (const auto& [method, records] : forecasts) {
            std::vector<std::tuple<double, double, double>> pts;
            for (const auto& r : records) {
                if (r.date == last && evaluate::maturity_of(r.variable) == months) {
                    pts.emplace_back(*evaluate::moneyness_of(r.variable), r.predicted, r.realized);
                }
            }
            std::sort(pts.begin(), pts.end());
            if (!realized_added) {
                svg::Line real{"realized", {}, {}, false, true};
                for (const auto& [x, pred, rv] : pts) {
                    real.x.push_back(x);
                    real.y.push_back(rv);
                }
                p.lines.push_back(std::move(real));
                realized_added = true;
            }
            svg::Line line{method, {}, {}, true, false};
            for (const auto& [x, pred, rv] : pts) {
                line.x.push_back(x);
                line.y.push_back(pred);
            }
            p.lines.push_back(std::move(line));
        }
        f.panels.push_back(std::move(p));
    }
    return f;
}

std::vector<double> index_axis(std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = static_cast<double>(i);
    }
    return x;
}

// ----------------------------------------------------------------- commands

void cmd_build_surface(const RunConfig& c, Artifacts& a) {
    SurfaceData data = load_surfaces(c, a);
    std::vector<Date> dates;
    for (const auto& g : data.grids) {
        dates.push_back(g.date);
    }
    set_metadata(a, c, "build-surface", dates);
    a.metadata.emplace_back("rates", c.get("input.rates"));
    a.metadata.emplace_back("side", c.get("surface.side"));
    a.metadata.emplace_back("curvature", c.get("surface.curvature"));
    a.add_text("surface.csv", surface::write_surface_csv(data.grids));
    const auto pc = param_config(c);
    std::vector<surface::SurfaceParamVector> params;
    for (const auto& g : data.grids) {
        params.push_back(surface::surface_params(g, pc));
    }
    const auto& g0 = data.grids.front();
    a.metadata.emplace_back("slope_units", "iv per year of maturity");
    a.add_text("params.csv", surface::write_params_csv(params, g0.maturities_months, g0.moneyness_levels));
    std::string report = "date,quotes_considered,inversion_failures,expiries_used,expiries_dropped,degenerate_rows\n";
    for (std::size_t i = 0; i < data.grids.size(); ++i) {
        const auto& diag = data.diagnostics[i];
        const auto degenerate = std::count(params[i].degenerate_rows.begin(), params[i].degenerate_rows.end(), true);
        report += format_date(data.grids[i].date) + "," + std::to_string(diag.quotes_considered) + "," +
                  std::to_string(diag.inversion_failures) + "," + std::to_string(diag.expiries_used) + "," +
                  std::to_string(diag.expiries_dropped) + "," + std::to_string(degenerate) + "\n";
    }
    a.add_text("build_report.csv", report);
    std::string rejects = "line,code,message\n";
    for (const auto& r : data.rejects) {
        std::string msg = r.message;
        std::replace(msg.begin(), msg.end(), ',', ';');
        rejects += std::to_string(r.line) + "," + std::string(to_string(r.code)) + "," + msg + "\n";
    }
    a.add_text("rejects.csv", rejects);
    a.add_svg("surface_snapshot.svg", surface_figure(data.grids.back()));
}

void cmd_sentiment(const RunConfig& c, Artifacts& a) {
    const std::string& label = c.get("sentiment.method");
    sentiment::CompositeResult pca;
    const SentimentSeries s = load_sentiment(c, label, &pca);
    set_metadata(a, c, "sentiment", s.dates);
    a.add_raw("sentiment.csv", a.csv_header() + sentiment::write_sentiment_csv(s));
    if (label == "pca") {
        a.add_text("loadings.csv", sentiment::write_loadings_csv(pca.loadings));
    }
}

void cmd_decompose(const RunConfig& c, Artifacts& a) {
    const SentimentSeries s = load_sentiment(c, c.get("sentiment.method"), nullptr);
    set_metadata(a, c, "decompose", s.dates);
    const Decomposed d = decompose_series(c, s);
    for (const auto& [key, value] : d.result.params) {
        a.metadata.emplace_back("decompose." + key, value);
    }
    a.add_text("decomposition.csv", decompose::write_decomposition_csv(s, d.result));
    const auto x = index_axis(s.size());
    svg::Figure split;
    split.title = "Sentiment decomposition (" + std::string(decompose::to_string(d.result.method)) + ")";
    split.panel_width = 900;
    split.panels.push_back({"original", "observation", "score", {{s.label, x, s.values}}});
    split.panels.push_back({"high frequency", "observation", "score", {{"hfs", x, d.result.hfs.values}}});
    split.panels.push_back({"low frequency", "observation", "score", {{"lfs", x, d.result.lfs.values}}});
    a.add_svg("decomposition.svg", split);

    if (d.result.method == decompose::Method::Fft) {
        const auto spec = decompose::amplitude_spectrum(s.values);
        std::string csv = "bin,frequency,period,amplitude\n";
        svg::Line line{"amplitude", {}, {}, false, false};
        for (std::size_t i = 0; i < spec.bin.size(); ++i) {
            const double freq = spec.bin[i] / static_cast<double>(s.size());
            csv += std::to_string(spec.bin[i]) + "," + format_double(freq) + "," + format_double(spec.period[i]) +
                   "," + format_double(spec.amplitude[i]) + "\n";
            line.x.push_back(freq);
            line.y.push_back(spec.amplitude[i]);
        }
        a.add_text("spectrum.csv", csv);
        svg::Figure f;
        f.title = "Amplitude spectrum";
        f.panel_width = 900;
        f.panels.push_back({"", "frequency (cycles per observation)", "amplitude", {line}});
        f.footer = "high frequency: period below " + d.result.params.at("cutoff_period") + " observations (effective " +
                   d.result.params.at("effective_period") + ")";
        a.add_svg("spectrum.svg", f);
        if (d.result.extreme_low) {
            std::string band = "date,value\n";
            for (std::size_t i = 0; i < s.size(); ++i) {
                band += format_date(s.dates[i]) + "," + format_double(d.result.extreme_low->values[i]) + "\n";
            }
            a.add_text("extreme_low.csv", band);
        }
    }
    if (d.imfs) {
        a.add_text("imfs.csv", decompose::write_imfs_csv(*d.imfs));
        svg::Figure f;
        f.title = "Intrinsic mode functions";
        f.panel_width = 900;
        f.panel_height = 150;
        f.panels.push_back({"original", "", "", {{"", x, s.values}}});
        for (std::size_t i = 0; i < d.imfs->count(); ++i) {
            f.panels.push_back({"IMF " + std::to_string(i + 1), "", "", {{"", x, d.imfs->imfs[i]}}});
        }
        f.panels.push_back({"residual", "observation", "", {{"", x, d.imfs->residual}}});
        a.add_svg("imfs.svg", f);
    }
}

struct FittedSetup {
    Dataset data;
    var::StatePanel panel;
    int lags = 1;
};

FittedSetup prepare_full_panel(const RunConfig& c, const std::string& command, Artifacts& a, bool lag_report) {
    FittedSetup s;
    const std::string label = c.get("sentiment.method");
    s.data = build_dataset(c, {label}, a);
    set_metadata(a, c, command, s.data.dates);
    s.panel = with_sentiment(s.data.surface_panel, s.data.decompositions.front().second.result);
    s.lags = resolve_lags(c, s.panel, s.data.exog ? &*s.data.exog : nullptr, lag_report ? &a : nullptr);
    return s;
}

std::vector<report::CoefTable> model_tables(const RunConfig& c, const var::VarModel& model, const Dataset& data) {
    std::vector<std::string> regressors;
    for (const auto& name : {"hfs", "lfs"}) {
        const std::string r = std::string(name) + "(t-1)";
        if (std::find(model.regressor_names.begin(), model.regressor_names.end(), r) != model.regressor_names.end()) {
            regressors.push_back(r);
        }
    }
    for (const auto& e : model.exog_names) {
        regressors.push_back(e);
    }
    regressors.emplace_back("const");
    const auto& g0 = data.surfaces.grids.front();
    std::vector<std::string> maturity_groups;
    for (int m : g0.maturities_months) {
        maturity_groups.push_back(std::to_string(m));
    }

    std::vector<report::CoefTable> tables;
    if (c.get("var.form") == "parameter") {
        std::vector<std::string> eqs;
        for (int m : g0.maturities_months) {
            eqs.push_back("skew_" + surface::maturity_label(m));
            eqs.push_back("cur_" + surface::maturity_label(m));
        }
        auto t1 = report::model_table(model, regressors, eqs, maturity_groups, {"skew", "cur"});
        t1.corner = "tau (months)";
        tables.push_back(std::move(t1));
        std::vector<std::string> slope_eqs;
        std::vector<std::string> level_groups;
        for (double k : g0.moneyness_levels) {
            slope_eqs.push_back("slope_" + surface::level_label(k));
            level_groups.push_back(surface::level_label(k));
        }
        auto t2 = report::model_table(model, regressors, slope_eqs, level_groups, {});
        t2.corner = "K (per mille of S)";
        tables.push_back(std::move(t2));
    } else {
        for (const auto& level : split_list(c.get("var.levels"))) {
            double k = 0.0;
            parse_double(level, k);
            std::vector<std::string> eqs;
            for (int m : g0.maturities_months) {
                eqs.push_back(var::iv_variable_name(m, k));
            }
            auto t = report::model_table(model, regressors, eqs, maturity_groups, {});
            t.corner = "K=" + surface::level_label(k) + " / tau (months)";
            tables.push_back(std::move(t));
        }
    }
    return tables;
}

void cmd_var_fit(const RunConfig& c, Artifacts& a) {
    FittedSetup s = prepare_full_panel(c, "var-fit", a, true);
    const var::StatePanel* exog = s.data.exog ? &*s.data.exog : nullptr;
    const var::VarModel model = var::fit_var(s.panel, s.lags, exog);
    for (const auto& w : model.warnings) {
        a.warnings.push_back(w);
    }
    const auto stability = var::stability_check(model);
    if (!stability.stable) {
        a.warnings.push_back("fitted model is not stable (companion modulus " + format_double(stability.max_modulus) + ")");
    }
    a.add_text("panel.csv", var::write_panel_csv(s.panel));
    auto model_json = nlohmann::ordered_json::parse(var::write_model_json(model));
    model_json["stability"] = {{"stable", stability.stable}, {"max_modulus", stability.max_modulus}};
    model_json["aic"] = var::aic(model);
    a.add_json("model.json", model_json.dump());
    a.add_text("coefficients.csv", report::coefficient_report(model));

    std::string text;
    for (const auto& t : model_tables(c, model, s.data)) {
        text += report::render_coef_table(t, report::Bracket::StdError) + "\n";
    }
    text += "# same coefficients with t statistics in parentheses\n";
    for (const auto& t : model_tables(c, model, s.data)) {
        text += report::render_coef_table(t, report::Bracket::TStat) + "\n";
    }
    a.add_text("coefficients.txt", text);
}

void cmd_var_irf(const RunConfig& c, Artifacts& a) {
    FittedSetup s = prepare_full_panel(c, "var-irf", a, false);
    const var::StatePanel* exog = s.data.exog ? &*s.data.exog : nullptr;
    const var::VarModel model = var::fit_var(s.panel, s.lags, exog);
    const auto stability = var::stability_check(model);
    if (!stability.stable) {
        a.warnings.push_back("responses of an unstable model do not decay (companion modulus " +
                             format_double(stability.max_modulus) + ")");
    }
    const int horizon = to_int(c, "var.irf_horizon");
    const bool orth = to_bool(c, "var.orthogonalized");
    std::vector<var::IrfResult> results;
    for (const auto& shock : {"hfs", "lfs"}) {
        if (std::find(model.names.begin(), model.names.end(), shock) != model.names.end()) {
            results.push_back(var::irf(model, shock, horizon, orth));
        }
    }
    a.add_text("irf.csv", var::write_irf_csv(results));

    svg::Figure f;
    f.title = orth ? "Orthogonalized impulse responses" : "Impulse responses to a unit shock";
    f.columns = 6;
    f.panel_width = 240;
    f.panel_height = 180;
    const auto x = index_axis(static_cast<std::size_t>(horizon) + 1);
    for (const auto& r : results) {
        for (std::size_t v = 0; v < r.responses.size(); ++v) {
            if (r.responses[v] == "hfs" || r.responses[v] == "lfs") {
                continue;
            }
            svg::Line line{"", x, {}, false, false};
            for (Eigen::Index h = 0; h <= horizon; ++h) {
                line.y.push_back(r.values(h, static_cast<Eigen::Index>(v)));
            }
            f.panels.push_back({r.shock + " -> " + r.responses[v], "horizon", "response", {line}});
        }
    }
    f.footer = std::string(orth ? "Cholesky ordering: surface variables, hfs, lfs." : "Reduced-form responses.") +
               " Point estimates only; no confidence bands.";
    a.add_svg("irf.svg", f);
}

void cmd_granger(const RunConfig& c, Artifacts& a) {
    FittedSetup s = prepare_full_panel(c, "granger", a, false);
    std::string csv = "cause,effect,lags,f_stat,p_value,df_num,df_den\n";
    for (const auto& cause : {"hfs", "lfs"}) {
        for (const auto& effect : s.data.surface_panel.names) {
            const auto g = var::granger(s.panel, {cause}, effect, s.lags);
            csv += std::string(cause) + "," + effect + "," + std::to_string(s.lags) + "," + format_double(g.f_stat) +
                   "," + format_double(g.p_value) + "," + format_double(g.df_num) + "," + format_double(g.df_den) + "\n";
        }
    }
    a.add_text("granger.csv", csv);
}

void cmd_forecast(const RunConfig& c, Artifacts& a) {
    const std::string label = c.get("sentiment.method");
    Dataset d = build_dataset(c, {label}, a);
    set_metadata(a, c, "forecast", d.dates);
    const var::StatePanel panel = with_sentiment(d.surface_panel, d.decompositions.front().second.result);
    evaluate::ModelSpec spec{panel.names, d.surface_panel.names, fixed_lags(c), to_int(c, "var.max_lags")};
    const auto rolling = rolling_config(c);
    a.metadata.emplace_back("window", std::to_string(rolling.initial_window) +
                                          (rolling.expanding ? " expanding" : " fixed") + ", step " +
                                          std::to_string(rolling.step));
    const auto result = evaluate::rolling_forecast(panel, spec, rolling, d.exog ? &*d.exog : nullptr);
    a.metadata.emplace_back("lags", std::to_string(result.lags));
    for (const auto& w : result.warnings) {
        a.warnings.push_back(w);
    }
    a.add_text("forecasts.csv", evaluate::write_forecasts_csv(result.records));
    a.add_svg("smirk.svg", smirk_figure({{label, result.records}}));
}

void cmd_evaluate(const RunConfig& c, Artifacts& a) {
    const auto methods = split_list(c.get("evaluate.methods"));
    if (methods.empty()) {
        fail(ErrorCode::ConfigError, "evaluate.methods is empty");
    }
    std::vector<std::string> labels;
    for (const auto& m : methods) {
        if (!is_baseline(m)) {
            labels.push_back(m);
        }
    }
    Dataset d = build_dataset(c, labels, a);
    set_metadata(a, c, "evaluate", d.dates);

    evaluate::CompareOptions opts;
    opts.include_none = std::find(methods.begin(), methods.end(), "none") != methods.end();
    opts.include_random_walk = std::find(methods.begin(), methods.end(), "random_walk") != methods.end();
    opts.lags = fixed_lags(c);
    opts.max_lags = to_int(c, "var.max_lags");
    opts.rolling = rolling_config(c);
    a.metadata.emplace_back("window", std::to_string(opts.rolling.initial_window) +
                                          (opts.rolling.expanding ? " expanding" : " fixed") + ", step " +
                                          std::to_string(opts.rolling.step));
    a.metadata.emplace_back("methods", c.get("evaluate.methods"));
    std::vector<evaluate::SentimentVariant> variants;
    for (const auto& [label, dec] : d.decompositions) {
        variants.push_back({label, dec.result.hfs, dec.result.lfs});
    }
    const auto comparison = evaluate::compare_methods(d.surface_panel, variants, opts, d.exog ? &*d.exog : nullptr);
    for (const auto& w : comparison.warnings) {
        a.warnings.push_back(w);
    }

    // Report in the configured method order.
    std::vector<evaluate::AccuracyReport> reports;
    std::vector<std::pair<std::string, std::vector<evaluate::ForecastRecord>>> forecasts;
    for (const auto& m : methods) {
        for (std::size_t i = 0; i < comparison.reports.size(); ++i) {
            if (comparison.reports[i].method == m) {
                reports.push_back(comparison.reports[i]);
                forecasts.push_back(comparison.forecasts[i]);
            }
        }
    }
    a.add_text("accuracy.csv", evaluate::write_accuracy_csv(reports));
    std::vector<report::AccuracyColumn> columns;
    for (const auto& r : reports) {
        report::AccuracyColumn col{r.method, {}};
        for (const auto& b : r.buckets) {
            col.rows.emplace_back(b.bucket, b.mape);
        }
        columns.push_back(std::move(col));
    }
    a.add_text("accuracy_table.txt", "# MAPE by maturity bucket\n" + report::render_accuracy_table(columns));
    for (const auto& [method, records] : forecasts) {
        a.add_text("forecasts_" + method + ".csv", evaluate::write_forecasts_csv(records));
    }
    a.add_svg("smirk.svg", smirk_figure(forecasts));
}

void cmd_robustness(const RunConfig& c, Artifacts& a) {
    FittedSetup s = prepare_full_panel(c, "robustness", a, false);
    std::vector<evaluate::DateRange> windows;
    const std::string& spec = c.get("robustness.windows");
    if (spec == "halves") {
        const std::size_t half = s.data.dates.size() / 2;
        if (half < 1) {
            fail(ErrorCode::InsufficientSample, "too few dates to split in halves");
        }
        windows.push_back({s.data.dates.front(), s.data.dates[half - 1]});
        windows.push_back({s.data.dates[half], s.data.dates.back()});
    } else {
        for (const auto& item : split_list(spec)) {
            const auto colon = item.find(':');
            if (colon == std::string::npos) {
                fail(ErrorCode::ConfigError, "robustness window '" + item + "' is not first:last");
            }
            windows.push_back({to_date(item.substr(0, colon), "robustness window"),
                               to_date(item.substr(colon + 1), "robustness window")});
        }
    }
    std::string listed;
    for (const auto& w : windows) {
        listed += (listed.empty() ? "" : " ") + format_date(w.first) + ".." + format_date(w.last);
    }
    a.metadata.emplace_back("windows", listed);
    const auto report =
        evaluate::subperiod_robustness(s.panel, windows, s.panel.names, s.lags, s.data.exog ? &*s.data.exog : nullptr);
    a.add_text("robustness.csv", evaluate::write_robustness_csv(report));
}

void cmd_generate(const RunConfig& c, Artifacts& a) {
    const std::string& scenario = c.get("generate.scenario");
    const int horizon = to_int(c, "generate.horizon");
    const Date start = to_date(c.get("generate.start"), "generate.start");
    long long seed_value = 0;
    if (!parse_long(c.get("run.seed"), seed_value)) {
        fail(ErrorCode::ConfigError, "run.seed must be an integer");
    }
    const auto seed = static_cast<std::uint64_t>(seed_value);
    const surface::GridConfig grid = grid_config(c);

    const auto emit_world = [&](const synth::OptionWorld& w) {
        set_metadata(a, c, "generate", w.dates);
        a.metadata.emplace_back("scenario", scenario);
        a.add_text("quotes.csv", io::write_quotes(w.quotes));
        a.add_text("rates.csv", io::write_rates(w.rates));
        a.add_text("truth_surface.csv", surface::write_surface_csv(w.truth));
    };

    if (scenario == "flat" || scenario == "smirk") {
        synth::OptionWorldSpec spec;
        spec.scenario = scenario;
        spec.horizon = horizon;
        spec.seed = seed;
        spec.start = start;
        spec.vol_level = to_double(c, "generate.vol_level");
        spec.smirk_slope = to_double(c, "generate.smirk_slope");
        emit_world(synth::gen_option_world(spec, grid));
    } else if (scenario == "planted") {
        synth::PlantedSpec spec;
        spec.horizon = horizon;
        spec.seed = seed;
        spec.start = start;
        spec.loading = to_double(c, "generate.loading");
        spec.vol_level = to_double(c, "generate.vol_level");
        spec.smirk_slope = to_double(c, "generate.smirk_slope");
        const auto world = synth::gen_planted(spec, grid);
        emit_world(world.options);
        a.add_text("proxies.csv", io::write_proxies(world.proxies.panel));
        a.add_text("latent.csv", var::write_panel_csv(world.cells.panel));
        a.add_json("truth_model.json", var::write_model_json(world.cells.truth));
    } else if (scenario == "var") {
        synth::VarSpec spec;
        spec.names = {"y1", "y2", "y3"};
        spec.intercept = Eigen::VectorXd::Zero(3);
        spec.phi = {0.5 * Eigen::MatrixXd::Identity(3, 3)};
        spec.shock_cov = Eigen::MatrixXd::Identity(3, 3);
        spec.horizon = horizon;
        spec.seed = seed;
        spec.start = start;
        const auto world = synth::gen_var_panel(spec);
        set_metadata(a, c, "generate", world.panel.dates);
        a.metadata.emplace_back("scenario", scenario);
        a.add_text("panel.csv", var::write_panel_csv(world.panel));
        a.add_json("truth_model.json", var::write_model_json(world.truth));
    } else {
        fail(ErrorCode::ConfigError, "generate.scenario must be flat, smirk, planted or var");
    }
    if (scenario != "var") {
        // Config for running the pipeline on the generated files.
        RunConfig next = c;
        next.values["input.quotes"] = "quotes.csv";
        next.values["input.rates"] = "rates.csv";
        next.values["input.proxies"] = "proxies.csv";
        next.values["run.out"] = "results";
        a.add_raw("config.ini", print_config(next));
    }
}

void write_artifacts(const Artifacts& a, const std::filesystem::path& dir) {
    for (const auto& [name, content] : a.files) {
        write_text_file(dir / name, content);
    }
}

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    std::replace(s.begin(), s.end(), '\r', ' ');
    std::replace(s.begin(), s.end(), '"', '\'');
    return s;
}

int exit_code(ErrorCategory category) {
    switch (category) {
    case ErrorCategory::Config: return 2;
    case ErrorCategory::Data: return 3;
    case ErrorCategory::Numeric: return 4;
    }
    return 4;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Implied-volatility surfaces, sentiment decomposition and sentiment-augmented VAR forecasting"};
    app.set_version_flag("--version", std::string(kToolVersion));
    std::string command;
    std::string config_path;
    std::string out_dir;
    std::optional<long long> seed;
    bool show_config = false;
    std::string cutoff;
    std::string lags;
    std::string grid;
    std::optional<int> window;
    app.add_option("command", command, "build-surface | sentiment | decompose | var-fit | var-irf | granger | forecast | "
                                       "evaluate | robustness | generate")
        ->check(CLI::IsMember({"build-surface", "sentiment", "decompose", "var-fit", "var-irf", "granger", "forecast",
                               "evaluate", "robustness", "generate"}));
    app.add_option("--config", config_path, "INI configuration file");
    app.add_option("--out", out_dir, "output directory (overrides run.out)");
    app.add_option("--seed", seed, "random seed (overrides run.seed)");
    app.add_flag("--print-config", show_config, "print the effective configuration and exit");
    app.add_option("--cutoff-period", cutoff, "overrides decompose.cutoff_period");
    app.add_option("--lags", lags, "overrides var.lags");
    app.add_option("--grid", grid, "overrides surface.grid");
    app.add_option("--window", window, "overrides evaluate.window");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: category=config-error code=UsageError message=\"" << one_line(e.what()) << "\"\n";
        return 2;
    }

    try {
        RunConfig cfg = default_config();
        std::filesystem::path out_path;
        if (!config_path.empty()) {
            const std::filesystem::path p = config_path;
            cfg = parse_config(read_text_file(p), p.has_parent_path() ? p.parent_path() : ".");
            out_path = cfg.path("run.out");
        } else {
            out_path = cfg.get("run.out");
        }
        if (seed) {
            cfg.set("run.seed", std::to_string(*seed));
        }
        if (!cutoff.empty()) {
            cfg.set("decompose.cutoff_period", cutoff);
        }
        if (!lags.empty()) {
            cfg.set("var.lags", lags);
        }
        if (!grid.empty()) {
            cfg.set("surface.grid", grid);
        }
        if (window) {
            cfg.set("evaluate.window", std::to_string(*window));
        }
        if (!out_dir.empty()) {
            out_path = out_dir;
            cfg.set("run.out", out_dir);
        }
        if (show_config) {
            out << print_config(cfg);
            return 0;
        }
        if (command.empty()) {
            fail(ErrorCode::ConfigError, "no command given");
        }

        Artifacts artifacts;
        if (command == "build-surface") {
            cmd_build_surface(cfg, artifacts);
        } else if (command == "sentiment") {
            cmd_sentiment(cfg, artifacts);
        } else if (command == "decompose") {
            cmd_decompose(cfg, artifacts);
        } else if (command == "var-fit") {
            cmd_var_fit(cfg, artifacts);
        } else if (command == "var-irf") {
            cmd_var_irf(cfg, artifacts);
        } else if (command == "granger") {
            cmd_granger(cfg, artifacts);
        } else if (command == "forecast") {
            cmd_forecast(cfg, artifacts);
        } else if (command == "evaluate") {
            cmd_evaluate(cfg, artifacts);
        } else if (command == "robustness") {
            cmd_robustness(cfg, artifacts);
        } else {
            cmd_generate(cfg, artifacts);
        }
        write_artifacts(artifacts, out_path);
        for (const auto& w : artifacts.warnings) {
            err << "warning: " << one_line(w) << "\n";
        }
        for (const auto& [name, content] : artifacts.files) {
            out << (out_path / name).string() << "\n";
        }
        return 0;
    } catch (const Error& e) {
        std::string message = e.what();
        const std::string prefix = std::string(to_string(e.code())) + ": ";
        if (message.rfind(prefix, 0) == 0) {
            message.erase(0, prefix.size());
        }
        err << "error: category=" << to_string(e.category()) << " code=" << to_string(e.code()) << " message=\""
            << one_line(message) << "\"\n";
        return exit_code(e.category());
    } catch (const std::exception& e) {
        err << "error: category=numeric-failure code=Internal message=\"" << one_line(e.what()) << "\"\n";
        return 4;
    }
}

int main_entry(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run(args, std::cout, std::cerr);
}

} // namespace sentivol::cli
