#include "../support.hpp"

#include "sentivol/error.hpp"
#include "sentivol/rng.hpp"
#include "sentivol/spline.hpp"
#include "sentivol/surface.hpp"
#include "sentivol/synthgen.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

using namespace sentivol;
using namespace sentivol::surface;
using testing::day;

namespace {

IVSurfaceGrid grid_from(const std::function<double(double tau, double m)>& f,
                        const GridConfig& cfg = GridConfig::default7()) {
    IVSurfaceGrid g;
    g.date = day("2020-01-02");
    g.maturities_months = cfg.maturities_months;
    g.moneyness_levels = cfg.moneyness_levels;
    for (int months : cfg.maturities_months) {
        for (double m : cfg.moneyness_levels) {
            g.values.push_back(f(months / 12.0, m));
        }
    }
    return g;
}

// Mean discrete curvature written out term by term.
double curvature_oracle(const std::vector<double>& k, const std::vector<double>& iv, bool literal) {
    const double dk = k[1] - k[0];
    double sum = 0.0;
    for (std::size_t i = 1; i + 1 < iv.size(); ++i) {
        const double second = (iv[i + 1] - 2 * iv[i] + iv[i - 1]) / (dk * dk);
        const double slope = (iv[i + 1] - iv[i - 1]) / (2 * dk);
        sum += second / std::pow(1.0 + (literal ? slope : slope * slope), 1.5);
    }
    return sum / static_cast<double>(literal ? iv.size() : iv.size() - 2);
}

double skew_oracle(const std::vector<double>& x) {
    const double n = static_cast<double>(x.size());
    const double mu = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double m2 = 0.0;
    double m3 = 0.0;
    for (double v : x) {
        m2 += (v - mu) * (v - mu) / n;
        m3 += (v - mu) * (v - mu) * (v - mu) / n;
    }
    return m3 / std::pow(m2, 1.5);
}

// Two-variable least squares through the normal equations.
double slope_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

TEST_CASE("grid configurations") {
    CHECK(GridConfig::default7().moneyness_levels.size() == 7);
    CHECK(GridConfig::paper24().moneyness_levels.size() == 6);
    CHECK(GridConfig::paper24().maturities_months.size() * GridConfig::paper24().moneyness_levels.size() == 24);
    CHECK(maturity_label(12) == "12m");
    CHECK(level_label(0.975) == "0975");
    CHECK(level_label(1.3) == "1300");
}

TEST_CASE("flat synthetic world recovers 0.2 in every cell") {
    synth::OptionWorldSpec spec;
    spec.horizon = 5;
    const auto world = synth::gen_option_world(spec);
    std::map<Date, std::vector<io::OptionQuote>> by_date;
    for (const auto& q : world.quotes) {
        by_date[q.trade_date].push_back(q);
    }
    REQUIRE(by_date.size() == 5);
    for (const auto& [d, quotes] : by_date) {
        const auto built = build_grid(quotes, spec.rate);
        for (double v : built.grid.values) {
            CHECK(std::fabs(v - 0.2) < 1e-4);
        }
        CHECK(built.diagnostics.inversion_failures == 0);
    }
}

TEST_CASE("points on grid nodes give the node values exactly") {
    const GridConfig cfg = GridConfig::default7();
    std::vector<IVPoint> points;
    Rng rng(4);
    std::map<std::pair<int, double>, double> node;
    for (int months : cfg.maturities_months) {
        for (double m : cfg.moneyness_levels) {
            const double iv = rng.uniform(0.1, 0.5);
            node[{months, m}] = iv;
            points.push_back({months / 12.0, m, iv});
        }
    }
    const auto g = build_grid_from_points(day("2020-01-02"), points, cfg);
    for (std::size_t i = 0; i < cfg.maturities_months.size(); ++i) {
        for (std::size_t j = 0; j < cfg.moneyness_levels.size(); ++j) {
            CHECK(g.at(i, j) == node[{cfg.maturities_months[i], cfg.moneyness_levels[j]}]);
        }
    }
}

TEST_CASE("a single expiry is insufficient") {
    std::vector<IVPoint> points;
    for (double m = 0.6; m <= 1.31; m += 0.05) {
        points.push_back({0.25, m, 0.2});
    }
    CHECK_THROWS_MATCHES(build_grid_from_points(day("2020-01-02"), points), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == ErrorCode::InsufficientQuotes;
                         }));
}

TEST_CASE("total variance is linear between expiries") {
    GridConfig cfg;
    cfg.maturities_months = {6};
    std::vector<IVPoint> points;
    for (double m = 0.5; m <= 1.51; m += 0.05) {
        points.push_back({0.25, m, 0.2});
        points.push_back({1.0, m, 0.3});
    }
    const auto g = build_grid_from_points(day("2020-01-02"), points, cfg);
    const double w = 0.04 * 0.25 + (0.09 * 1.0 - 0.04 * 0.25) * (0.5 - 0.25) / 0.75;
    for (double v : g.values) {
        CHECK(v == Catch::Approx(std::sqrt(w / 0.5)).margin(1e-12));
    }
}

TEST_CASE("interpolation reproduces nodes, constants and affine surfaces") {
    const auto flat = grid_from([](double, double) { return 0.2; });
    const auto affine_tau = grid_from([](double tau, double) { return 0.15 + 0.1 * tau; });
    const auto affine_both = grid_from([](double tau, double m) { return 0.1 + 0.05 * tau + 0.2 * m; });
    Rng rng(8);
    for (int i = 0; i < 200; ++i) {
        const double tau = rng.uniform(1.0 / 12.0, 1.0);
        const double m = rng.uniform(0.6, 1.3);
        CHECK(interpolate(flat, tau, m) == Catch::Approx(0.2).margin(1e-10));
        CHECK(interpolate(affine_tau, tau, m) == Catch::Approx(0.15 + 0.1 * tau).margin(1e-10));
        CHECK(interpolate(affine_both, tau, m) == Catch::Approx(0.1 + 0.05 * tau + 0.2 * m).margin(1e-10));
    }
    const auto random = grid_from([&](double, double) { return rng.uniform(0.1, 0.4); });
    for (std::size_t i = 0; i < random.maturities_months.size(); ++i) {
        for (std::size_t j = 0; j < random.moneyness_levels.size(); ++j) {
            CHECK(interpolate(random, random.tau(i), random.moneyness_levels[j]) == random.at(i, j));
        }
    }
    CHECK_THROWS_AS(interpolate(flat, 2.0, 1.0, false), Error);
    CHECK(interpolate(flat, 2.0, 1.0, true) == Catch::Approx(0.2));
}

TEST_CASE("smile curvature examples") {
    const std::vector<double> k{90, 95, 100, 105, 110};
    CHECK(smile_curvature(k, std::vector<double>{0.2, 0.2, 0.2, 0.2, 0.2}) == 0.0);
    const std::vector<double> smile{0.24, 0.21, 0.20, 0.21, 0.24};
    const double c = smile_curvature(k, smile);
    CHECK(c == Catch::Approx(0.0008).epsilon(1e-3));
    CHECK(c == Catch::Approx(curvature_oracle(k, smile, false)).epsilon(1e-14));
    CHECK(smile_curvature(k, smile, CurvatureVariant::PaperLiteral) ==
          Catch::Approx(curvature_oracle(k, smile, true)).epsilon(1e-14));
    std::vector<double> linear;
    for (double s : k) {
        linear.push_back(0.5 - 0.002 * s);
    }
    CHECK(std::fabs(smile_curvature(k, linear)) < 1e-12);
    CHECK_THROWS_AS(smile_curvature(std::vector<double>{90, 95, 101}, std::vector<double>{0.2, 0.2, 0.2}), Error);
}

TEST_CASE("smile skewness examples") {
    CHECK(std::fabs(smile_skewness(std::vector<double>{0.24, 0.21, 0.20, 0.21, 0.24}) -
                    skew_oracle({0.24, 0.21, 0.20, 0.21, 0.24})) < 1e-12);
    const std::vector<double> mirror{0.30, 0.22, 0.20, 0.22, 0.30};
    CHECK(std::fabs(smile_skewness(mirror) - skew_oracle(mirror)) < 1e-12);
    CHECK(smile_skewness(std::vector<double>{0.2, 0.2, 0.2, 0.5}) == Catch::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-12));
    CHECK_THROWS_AS(smile_skewness(std::vector<double>{0.2, 0.2, 0.2}), Error);
}

TEST_CASE("skewness of the smile values: symmetric spread is zero, reflection flips the sign") {
    // Values placed symmetrically about their mean: odd central moments vanish.
    CHECK(std::fabs(smile_skewness(std::vector<double>{0.24, 0.21, 0.22, 0.23, 0.20})) < 1e-10);
    // A U-shaped smile has most values low and a few high, so it is right-skewed.
    const std::vector<double> smile{0.24, 0.21, 0.20, 0.21, 0.24};
    std::vector<double> reflected;
    for (double v : smile) {
        reflected.push_back(0.5 - v);
    }
    CHECK(smile_skewness(smile) > 0.0);
    CHECK(smile_skewness(reflected) == Catch::Approx(-smile_skewness(smile)).epsilon(1e-10));
}

TEST_CASE("curvature and skewness are translation invariant in strike") {
    Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> k;
        std::vector<double> iv;
        const double dk = rng.uniform(0.5, 5);
        for (int i = 0; i < 7; ++i) {
            k.push_back(50 + dk * i);
            iv.push_back(rng.uniform(0.1, 0.4));
        }
        std::vector<double> shifted = k;
        const double shift = rng.uniform(-40, 40);
        for (double& v : shifted) {
            v += shift;
        }
        CHECK(smile_curvature(shifted, iv) == Catch::Approx(smile_curvature(k, iv)).epsilon(1e-9));
        CHECK(smile_skewness(iv) == smile_skewness(iv));
        std::vector<double> sym{iv[0], iv[1], iv[2], iv[3], iv[2], iv[1], iv[0]};
        std::vector<double> reversed(sym.rbegin(), sym.rend());
        CHECK(smile_curvature(k, reversed) == Catch::Approx(smile_curvature(k, sym)).epsilon(1e-12));
    }
}

TEST_CASE("term slope") {
    CHECK(std::fabs(term_slope(grid_from([](double, double) { return 0.2; }), 1.0)) < 1e-14);
    CHECK(term_slope(grid_from([](double tau, double) { return 0.2 + 0.12 * tau; }), 0.975) ==
          Catch::Approx(0.12).margin(1e-12));
    const auto convex = grid_from([](double tau, double) { return 0.2 + 0.3 * (tau - 0.4) * (tau - 0.4); });
    std::vector<double> taus;
    std::vector<double> ivs;
    for (std::size_t i = 0; i < convex.maturities_months.size(); ++i) {
        taus.push_back(convex.tau(i));
        ivs.push_back(convex.at(i, 0));
    }
    CHECK(term_slope(convex, 1.3) == Catch::Approx(slope_oracle(taus, ivs)).margin(1e-12));
    CHECK_THROWS_AS(term_slope(convex, 0.5), Error);
}

TEST_CASE("parameter vector of a flat surface") {
    const auto p = surface_params(grid_from([](double, double) { return 0.2; }));
    CHECK(p.flatten().size() == 15);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(p.skew_by_tau[i] == 0.0);
        CHECK(p.degenerate_rows[i]);
        CHECK(std::fabs(p.cur_by_tau[i]) < 1e-12);
    }
    CHECK(param_names({1, 3, 6, 12}, GridConfig::default7().moneyness_levels).size() == 15);
}

TEST_CASE("parameter vector of a smirk equals the component operations") {
    const auto g = grid_from([](double tau, double m) { return 0.2 + 0.3 * std::max(0.0, 1.0 - m) + 0.02 * tau; });
    const ParamConfig cfg;
    const auto p = surface_params(g, cfg);
    std::vector<double> ladder;
    for (int k = 0; k <= 8; ++k) {
        ladder.push_back(0.9 + 0.025 * k);
    }
    for (std::size_t i = 0; i < g.maturities_months.size(); ++i) {
        std::vector<double> levels;
        std::vector<double> row;
        for (std::size_t j = g.moneyness_levels.size(); j-- > 0;) { // ascending moneyness
            levels.push_back(g.moneyness_levels[j]);
            row.push_back(g.at(i, j));
        }
        const CubicSpline spline(levels, row);
        std::vector<double> smile;
        for (double m : ladder) {
            smile.push_back(spline(m));
        }
        CHECK(p.skew_by_tau[i] == Catch::Approx(skew_oracle(smile)).epsilon(1e-10));
        CHECK(p.cur_by_tau[i] == Catch::Approx(curvature_oracle(ladder, smile, false)).epsilon(1e-10));
        CHECK_FALSE(p.degenerate_rows[i]);
        CHECK(p.skew_by_tau[i] > 0.0); // downside-heavy smirk: long right tail of vols
    }
    for (std::size_t j = 0; j < g.moneyness_levels.size(); ++j) {
        CHECK(p.slope_by_m[j] == Catch::Approx(0.02).margin(1e-12));
    }
}

TEST_CASE("surface csv round trip") {
    Rng rng(2);
    std::vector<IVSurfaceGrid> grids;
    for (int d = 0; d < 3; ++d) {
        auto g = grid_from([&](double, double) { return rng.uniform(0.1, 0.5); });
        g.date = day("2020-01-02") + std::chrono::days(d);
        grids.push_back(g);
    }
    const auto dir = testing::scratch_dir("surface");
    const auto back = read_surface_csv(testing::write_file(dir / "s.csv", write_surface_csv(grids)));
    REQUIRE(back.size() == 3);
    for (std::size_t d = 0; d < 3; ++d) {
        CHECK(back[d].date == grids[d].date);
        CHECK(back[d].values == grids[d].values);
        CHECK(back[d].moneyness_levels == grids[d].moneyness_levels);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("validate rejects malformed grids") {
    auto g = grid_from([](double, double) { return 0.2; });
    g.values[3] = -0.1;
    CHECK_THROWS_AS(g.validate(), Error);
    g.values[3] = 6.0;
    CHECK_THROWS_AS(g.validate(5.0), Error);
    g.values.pop_back();
    CHECK_THROWS_AS(g.validate(), Error);
}
