// Quantitative acceptance suite. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.

#include "sentivol/black_scholes.hpp"
#include "sentivol/cli.hpp"
#include "sentivol/csv.hpp"
#include "sentivol/decompose.hpp"
#include "sentivol/error.hpp"
#include "sentivol/evaluate.hpp"
#include "sentivol/report.hpp"
#include "sentivol/rng.hpp"
#include "sentivol/stats.hpp"
#include "sentivol/surface.hpp"
#include "sentivol/synthgen.hpp"
#include "sentivol/varfit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

using namespace sentivol;
using Eigen::MatrixXd;
using Eigen::VectorXd;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void verdict(bool ok, const std::string& name, const std::string& detail) {
    std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    failures += ok ? 0 : 1;
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, format, a, b, c);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

fs::path scratch(const std::string& tag) {
    const auto dir =
        fs::temp_directory_path() / ("sentivol_accept_" + tag + "_" + std::to_string(static_cast<long>(::getpid())));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int status = cli::run(args, out, err);
    if (status != 0) {
        std::fprintf(stderr, "%s", err.str().c_str());
    }
    return status;
}

void patch_config(const fs::path& ini, const std::vector<std::pair<std::string, std::string>>& values) {
    auto cfg = cli::parse_config(read_text_file(ini), ini.parent_path());
    for (const auto& [k, v] : values) {
        cfg.set(k, v);
    }
    write_text_file(ini, cli::print_config(cfg));
}

std::vector<evaluate::ForecastRecord> read_forecasts(const fs::path& path) {
    const auto table = read_csv(path);
    const auto d = table.require_column("date");
    const auto v = table.require_column("variable");
    const auto p = table.require_column("predicted");
    const auto r = table.require_column("realized");
    std::vector<evaluate::ForecastRecord> out;
    for (const auto& row : table.rows) {
        evaluate::ForecastRecord rec;
        rec.date = *parse_date(row[d]);
        rec.variable = row[v];
        parse_double(row[p], rec.predicted);
        parse_double(row[r], rec.realized);
        out.push_back(rec);
    }
    return out;
}

Series make_series(const std::vector<double>& values) {
    Series s;
    s.label = "x";
    s.values = values;
    s.dates = synth::weekdays_from(Date{std::chrono::year{2010} / 1 / 1}, static_cast<int>(values.size()));
    return s;
}

std::vector<double> tone(std::size_t n, double period, double amplitude, double phase = 0.0) {
    std::vector<double> x(n);
    for (std::size_t t = 0; t < n; ++t) {
        x[t] = amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / period + phase);
    }
    return x;
}

// ------------------------------------------------------------------ pricing

void pricing() {
    struct Tuple {
        double s, k, r, tau, sigma;
    };
    Rng rng(20240601);
    std::vector<Tuple> tuples(10000);
    for (auto& t : tuples) {
        t.s = rng.uniform(0.5, 200.0);
        t.k = t.s * std::exp(rng.uniform(-0.7, 0.7));
        t.r = rng.uniform(0.0, 0.08);
        // Shorter maturities with sigma near 0.05 at |ln m| = 0.7 price below the
        // smallest double, where no volatility is recoverable.
        t.tau = rng.uniform(0.25, 2.0);
        t.sigma = rng.uniform(0.05, 2.0);
    }

    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    int solved = 0;
    for (const auto& t : tuples) {
        // Price the out-of-the-money side, as the surface builder does.
        const auto kind = t.k >= t.s ? surface::OptionKind::Call : surface::OptionKind::Put;
        const double price = surface::bs_price(t.s, t.k, t.r, t.tau, t.sigma, kind);
        try {
            const double iv = surface::implied_vol(price, t.s, t.k, t.r, t.tau, kind);
            worst = std::max(worst, std::fabs(iv - t.sigma));
            ++solved;
        } catch (const Error&) {
            worst = std::numeric_limits<double>::infinity();
        }
    }
    const double elapsed = seconds_since(t0);
    verdict(worst < 1e-6 && solved == 10000, "inversion round trip",
            fmt("max |sigma error| = %.3g over %.0f tuples (bound 1e-6)", worst, solved));
    verdict(elapsed < 5.0, "inversion runtime", fmt("%.3f s for 10000 inversions (bound 5 s)", elapsed));

    double parity = 0.0;
    for (const auto& t : tuples) {
        const double c = surface::bs_price(t.s, t.k, t.r, t.tau, t.sigma, surface::OptionKind::Call);
        const double p = surface::bs_price(t.s, t.k, t.r, t.tau, t.sigma, surface::OptionKind::Put);
        const double forward_value = t.s - t.k * std::exp(-t.r * t.tau);
        // Relative to the spot scale, since prices reach 200.
        parity = std::max(parity, std::fabs(c - p - forward_value) / std::max(1.0, t.s));
    }
    verdict(parity <= 1e-10, "put-call parity", fmt("max |C - P - (S - K e^{-r tau})| / max(1, S) = %.3g (bound 1e-10)", parity));
}

// ------------------------------------------------------------------ surface

void flat_world() {
    synth::OptionWorldSpec spec;
    spec.scenario = "flat";
    spec.vol_level = 0.2;
    spec.horizon = 100;
    const auto world = synth::gen_option_world(spec);
    std::map<Date, std::vector<io::OptionQuote>> by_day;
    for (const auto& q : world.quotes) {
        by_day[q.trade_date].push_back(q);
    }
    double worst = 0.0;
    double ape = 0.0;
    std::size_t cells = 0;
    std::size_t day = 0;
    for (const auto& [d, quotes] : by_day) {
        const auto built = surface::build_grid(quotes, spec.rate);
        const auto& truth = world.truth[day++];
        for (std::size_t i = 0; i < built.grid.values.size(); ++i) {
            worst = std::max(worst, std::fabs(built.grid.values[i] - 0.2));
            ape += std::fabs(built.grid.values[i] - truth.values[i]) / truth.values[i];
            ++cells;
        }
    }
    verdict(day == 100 && worst < 1e-4, "flat world grid", fmt("max |cell - 0.2| = %.3g over %.0f days (bound 1e-4)", worst, day));
    const double mape = ape / static_cast<double>(cells);
    verdict(mape < 1e-3, "flat world surface MAPE", fmt("%.3g%% (bound 0.1%%)", 100.0 * mape));
}

// ------------------------------------------------------------ decomposition

void decomposition() {
    Rng rng(7);
    double fft_err = 0.0;
    double emd_err = 0.0;
    double ma_ulps = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(2000);
        double level = rng.normal();
        for (auto& v : x) {
            level = 0.98 * level + 0.2 * rng.normal();
            v = level + rng.normal(0.0, 0.5);
        }
        const auto s = make_series(x);
        const auto f = decompose::fft_split(s);
        const auto e = decompose::emd_split(decompose::emd(s), 4);
        const auto m = decompose::ma_split(s, 22);
        for (std::size_t t = 0; t < x.size(); ++t) {
            fft_err = std::max(fft_err, std::fabs(f.hfs.values[t] + f.lfs.values[t] - x[t]));
            emd_err = std::max(emd_err, std::fabs(e.hfs.values[t] + e.lfs.values[t] - x[t]));
            const double scale = std::max({std::fabs(x[t]), std::fabs(m.lfs.values[t]), std::fabs(m.hfs.values[t])});
            const double ulp = std::nextafter(scale, std::numeric_limits<double>::infinity()) - scale;
            ma_ulps = std::max(ma_ulps, std::fabs(m.hfs.values[t] + m.lfs.values[t] - x[t]) / ulp);
        }
    }
    verdict(fft_err < 1e-9, "fft reconstruction", fmt("max |hfs + lfs - x| = %.3g over 100 series (bound 1e-9)", fft_err));
    verdict(emd_err < 1e-8, "emd reconstruction", fmt("max |hfs + lfs - x| = %.3g over 100 series (bound 1e-8)", emd_err));
    verdict(ma_ulps <= 1.0, "ma reconstruction", fmt("max error = %.2f ulp of the largest term (bound 1 ulp)", ma_ulps));

    const std::size_t n = 2000;
    const double amplitude = 1.0;
    const auto fast = tone(n, 8.0, amplitude);
    const auto slow = tone(n, 200.0, amplitude, 0.9);
    std::vector<double> sum(n);
    for (std::size_t t = 0; t < n; ++t) {
        sum[t] = fast[t] + slow[t];
    }
    const auto s = make_series(sum);
    const auto f = decompose::fft_split(s);
    double fft_tone = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        fft_tone = std::max({fft_tone, std::fabs(f.hfs.values[t] - fast[t]), std::fabs(f.lfs.values[t] - slow[t])});
    }
    verdict(fft_tone < 1e-6 * amplitude, "fft two-tone separation",
            fmt("max tone error = %.3g (bound 1e-6 x amplitude)", fft_tone));
    const auto e = decompose::emd_split(decompose::emd(s), 1);
    const double c_fast = stats::correlation(e.hfs.values, fast);
    const double c_slow = stats::correlation(e.lfs.values, slow);
    verdict(c_fast > 0.95 && c_slow > 0.95, "emd two-tone separation",
            fmt("corr(hfs, fast) = %.4f, corr(lfs, slow) = %.4f (bound 0.95)", c_fast, c_slow));
}

// ---------------------------------------------------------------------- VAR

synth::VarSpec var1_spec(std::uint64_t seed, int horizon) {
    synth::VarSpec s;
    s.names = {"y1", "y2", "y3"};
    s.intercept = VectorXd::Zero(3);
    s.phi = {0.5 * MatrixXd::Identity(3, 3)};
    s.shock_cov = MatrixXd::Identity(3, 3);
    s.horizon = horizon;
    s.seed = seed;
    return s;
}

void var_recovery() {
    int covered = 0;
    const int runs = 200;
    for (int r = 0; r < runs; ++r) {
        const auto spec = var1_spec(derive_seed(1001, r), 5000);
        const auto model = var::fit_var(synth::gen_var_panel(spec).panel, 1);
        bool all_inside = true;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                // Lag-1 coefficient of variable j in equation i sits at regressor row 1 + j.
                const double est = model.coef(1 + j, i);
                const double se = model.std_errors(1 + j, i);
                all_inside = all_inside && std::fabs(est - spec.phi[0](i, j)) <= 3.0 * se;
            }
        }
        covered += all_inside ? 1 : 0;
    }
    const double share = static_cast<double>(covered) / runs;
    verdict(share >= 0.95, "VAR coefficient coverage",
            fmt("all 9 lag coefficients within 3 se in %.1f%% of %.0f runs (bound 95%%)", 100.0 * share, runs));

    int hits = 0;
    const int aic_runs = 100;
    for (int r = 0; r < aic_runs; ++r) {
        synth::VarSpec s;
        s.names = {"y1", "y2"};
        s.intercept = VectorXd::Zero(2);
        MatrixXd a1(2, 2);
        MatrixXd a2(2, 2);
        a1 << 0.5, 0.1, 0.0, 0.4;
        a2 << -0.3, 0.0, 0.1, 0.25;
        s.phi = {a1, a2};
        s.shock_cov = MatrixXd::Identity(2, 2);
        s.horizon = 2000;
        s.seed = derive_seed(2002, r);
        hits += var::select_lag(synth::gen_var_panel(s).panel, 8).p == 2 ? 1 : 0;
    }
    verdict(hits >= 80, "AIC lag selection", fmt("true lag 2 chosen in %.0f of %.0f runs (bound 80%%)", hits, aic_runs));

    int rejections = 0;
    const int granger_runs = 1000;
    for (int r = 0; r < granger_runs; ++r) {
        auto s = var1_spec(derive_seed(3003, r), 500);
        s.names = {"cause", "effect"};
        s.intercept = VectorXd::Zero(2);
        s.phi = {0.5 * MatrixXd::Identity(2, 2)};
        s.shock_cov = MatrixXd::Identity(2, 2);
        const auto g = var::granger(synth::gen_var_panel(s).panel, {"cause"}, "effect", 1);
        rejections += g.p_value < 0.05 ? 1 : 0;
    }
    const double size = static_cast<double>(rejections) / granger_runs;
    verdict(std::fabs(size - 0.05) <= 0.02, "Granger test size",
            fmt("rejection rate %.3f at the 5%% level over %.0f null runs (bound 0.05 +/- 0.02)", size, granger_runs));

    auto spec = var1_spec(4004, 2000);
    spec.phi[0] << 0.6, 0.2, 0.0, -0.1, 0.5, 0.1, 0.05, 0.0, 0.7;
    const auto model = var::fit_var(synth::gen_var_panel(spec).panel, 1);
    double worst = 0.0;
    for (int j = 0; j < 3; ++j) {
        const auto response = var::irf(model, model.names[j], 50);
        MatrixXd power = MatrixXd::Identity(3, 3);
        for (int h = 0; h <= 50; ++h) {
            for (int i = 0; i < 3; ++i) {
                worst = std::max(worst, std::fabs(response.values(h, i) - power(i, j)));
            }
            power = model.phi[0] * power;
        }
    }
    verdict(worst <= 1e-10, "IRF closed form", fmt("max |IRF_h - Phi^h| over h <= 50 = %.3g (bound 1e-10)", worst));
}

// ------------------------------------------------------------ planted signal

struct PipelineRun {
    double atm_none = 0.0;
    double atm_pca = 0.0;
    double total_pca = 0.0;
    double total_rw = 0.0;
    double seconds = 0.0;
};

PipelineRun planted_run(const fs::path& dir, std::uint64_t seed) {
    const auto world = dir / "world";
    const auto t0 = std::chrono::steady_clock::now();
    if (run_cli({"generate", "--seed", std::to_string(seed), "--out", world.string()}) != 0) {
        throw std::runtime_error("generate failed");
    }
    patch_config(world / "config.ini", {{"evaluate.methods", "none,pca,random_walk"}});
    if (run_cli({"evaluate", "--config", (world / "config.ini").string(), "--out", (dir / "eval").string()}) != 0) {
        throw std::runtime_error("evaluate failed");
    }
    PipelineRun r;
    r.seconds = seconds_since(t0);
    const auto atm = [](const evaluate::ForecastRecord& rec) {
        const auto m = evaluate::moneyness_of(rec.variable);
        return m && std::fabs(*m - 0.975) < 1e-9;
    };
    const auto none = read_forecasts(dir / "eval" / "forecasts_none.csv");
    const auto pca = read_forecasts(dir / "eval" / "forecasts_pca.csv");
    const auto rw = read_forecasts(dir / "eval" / "forecasts_random_walk.csv");
    r.atm_none = evaluate::mape(evaluate::filter(none, atm));
    r.atm_pca = evaluate::mape(evaluate::filter(pca, atm));
    r.total_pca = evaluate::mape(pca);
    r.total_rw = evaluate::mape(rw);
    return r;
}

void planted_signal() {
    const auto dir = scratch("planted");
    const int runs = 50;
    int beats_none = 0;
    int beats_rw = 0;
    double slowest = 0.0;
    for (int i = 0; i < runs; ++i) {
        const auto r = planted_run(dir, 7000 + static_cast<std::uint64_t>(i));
        beats_none += r.atm_pca < r.atm_none ? 1 : 0;
        beats_rw += r.total_pca < r.total_rw ? 1 : 0;
        slowest = std::max(slowest, r.seconds);
        std::printf("  seed %d: ATM MAPE none %.4f%% pca %.4f%%, Total MAPE pca %.4f%% random walk %.4f%%, %.1f s\n",
                    7000 + i, 100 * r.atm_none, 100 * r.atm_pca, 100 * r.total_pca, 100 * r.total_rw, r.seconds);
    }
    verdict(beats_none >= 45, "planted signal vs no sentiment",
            fmt("pca beats none on ATM MAPE in %.0f of %.0f runs (bound 90%%)", beats_none, runs));
    verdict(beats_rw >= 45, "planted signal vs random walk",
            fmt("pca beats random walk on Total MAPE in %.0f of %.0f runs (bound 90%%)", beats_rw, runs));
    verdict(slowest < 60.0, "full pipeline runtime",
            fmt("slowest generate + evaluate on 2000 days: %.1f s (bound 60 s)", slowest));
    fs::remove_all(dir);
}

// -------------------------------------------------------------- determinism

void determinism() {
    const auto dir = scratch("determinism");
    bool same = run_cli({"generate", "--seed", "11", "--out", (dir / "world").string()}) == 0;
    const auto cfg = (dir / "world" / "config.ini").string();
    same = same && run_cli({"evaluate", "--config", cfg, "--out", (dir / "a").string()}) == 0;
    same = same && run_cli({"evaluate", "--config", cfg, "--out", (dir / "b").string()}) == 0;
    int files = 0;
    if (same) {
        for (const auto& entry : fs::directory_iterator(dir / "a")) {
            const auto other = dir / "b" / entry.path().filename();
            same = same && fs::exists(other) && read_text_file(entry.path()) == read_text_file(other);
            ++files;
        }
    }
    verdict(same && files > 0, "evaluate determinism", fmt("%.0f artifacts compared byte for byte", files));
    fs::remove_all(dir);
}

// ------------------------------------------------------------------ reports

void golden_tables() {
    const double coef[3][8] = {
        {0.194, 0.0502, 0.161, 0.0155, -0.00432, -0.108, -0.00232, -1.980},
        {-0.0183, -0.0121, -0.0283, -0.0163, 0.0459, -0.0297, 0.0961, -0.176},
        {0.144, 0.0959, 0.0894, 0.0718, 0.0211, 0.0370, -0.0874, -0.214},
    };
    const double se[3][8] = {
        {0.095, 0.052, 0.101, 0.041, 0.145, 0.065, 0.220, 0.595},
        {0.014, 0.008, 0.015, 0.006, 0.021, 0.010, 0.032, 0.087},
        {0.020, 0.011, 0.021, 0.008, 0.030, 0.014, 0.046, 0.124},
    };
    report::CoefTable t;
    t.corner = "τ";
    t.groups = {"1", "3", "6", "12"};
    t.sub_columns = {"skew", "cur"};
    t.row_labels = {"HFS_{t-1}", "LFS_{t-1}", "Constant"};
    for (int r = 0; r < 3; ++r) {
        t.cells.emplace_back();
        for (int c = 0; c < 8; ++c) {
            t.cells.back().push_back(report::CoefCell{coef[r][c], se[r][c], 0.0});
        }
    }
    const fs::path data = SENTIVOL_TEST_DATA;
    verdict(report::render_coef_table(t) == read_text_file(data / "golden" / "coef_table.txt"), "coefficient table layout",
            "stars and bracketed standard errors against golden/coef_table.txt");

    const std::vector<std::string> methods{"None", "Dictionary", "PCA", "LSTM", "BERT-BigBird"};
    const double mape[4][5] = {
        {0.2113, 0.2105, 0.2159, 0.2117, 0.2083},
        {0.1665, 0.1669, 0.1634, 0.1662, 0.1619},
        {0.2883, 0.2908, 0.2830, 0.2879, 0.2809},
        {0.2221, 0.2227, 0.2208, 0.2219, 0.2170},
    };
    const std::vector<std::string> buckets{"1M", "3M", "12M", "Total"};
    std::vector<report::AccuracyColumn> cols;
    for (std::size_t m = 0; m < methods.size(); ++m) {
        report::AccuracyColumn c{methods[m], {}};
        for (std::size_t b = 0; b < buckets.size(); ++b) {
            c.rows.emplace_back(buckets[b], mape[b][m]);
        }
        cols.push_back(c);
    }
    verdict(report::render_accuracy_table(cols) == read_text_file(data / "golden" / "accuracy_table.txt"),
            "accuracy table layout", "methods x {1M, 3M, 12M, Total} against golden/accuracy_table.txt");
}

} // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<std::pair<const char*, void (*)()>> sections = {
        {"pricing", pricing},       {"flat world", flat_world}, {"decomposition", decomposition},
        {"VAR", var_recovery},      {"reports", golden_tables}, {"determinism", determinism},
        {"planted signal", planted_signal},
    };
    for (const auto& [name, fn] : sections) {
        try {
            fn();
        } catch (const std::exception& e) {
            verdict(false, name, std::string("aborted: ") + e.what());
        }
    }
    std::printf("%d failure(s), %.1f s\n", failures, seconds_since(t0));
    return failures == 0 ? 0 : 1;
}
