#pragma once

#include "sentivol/data_io.hpp"
#include "sentivol/surface.hpp"
#include "sentivol/varfit.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sentivol::synth {

/// `horizon` consecutive weekdays starting at the first weekday >= start.
std::vector<Date> weekdays_from(Date start, int horizon);

/// Implied vol of the synthetic world on day index `day` at (tau years, K/S).
using VolFunction = std::function<double(std::size_t day, double tau, double moneyness)>;

struct OptionWorldSpec {
    std::string scenario = "flat"; // flat | smirk; ignored when a VolFunction is supplied
    int horizon = 100;
    std::uint64_t seed = 1;
    Date start = Date{std::chrono::year{2020} / 1 / 1};
    double spot0 = 3.0;
    double spot_vol = 0.2; // annualized, drives the underlying path only
    double rate = 0.02;
    double vol_level = 0.2;
    double smirk_slope = 0.3;                     // sigma = level + slope * (1 - m)+ in the smirk scenario
    std::vector<int> expiry_days{30, 91, 182, 365}; // calendar days, rolled forward to a weekday
    double moneyness_low = 0.5;
    double moneyness_high = 1.5;
    double moneyness_step = 0.025;
    double min_price = 1e-4; // quotes below this price are not listed
};

struct OptionWorld {
    std::vector<Date> dates;
    std::vector<double> spots;
    std::vector<io::OptionQuote> quotes; // out-of-the-money side, both sides at the money
    std::vector<io::RatePoint> rates;
    std::vector<surface::IVSurfaceGrid> truth; // vol function at the grid points
};

/// Quotes priced exactly by Black-Scholes under the scenario's vol function.
OptionWorld gen_option_world(const OptionWorldSpec& spec, const surface::GridConfig& grid = {},
                             const VolFunction& vol = {});

struct ProxySpec {
    int horizon = 500;
    std::uint64_t seed = 1;
    Date start = Date{std::chrono::year{2020} / 1 / 1};
    /// Loadings of adl, turnover and (negatively) cef discount on the factor.
    std::vector<double> loadings{1.0, 0.8, 0.6};
    double noise = 0.1;              // idiosyncratic sd relative to a unit factor
    double factor_persistence = 0.9; // AR(1) factor when none is supplied
};

struct ProxyWorld {
    io::ProxyPanel panel;
    Series factor; // unit-variance-scaled factor that drives the proxies
};

/// Raw proxy fields whose derived adl, turnover and cef discount follow
/// loading * factor + noise. A supplied factor is rescaled to unit sample sd.
ProxyWorld gen_proxy_panel(const ProxySpec& spec, const std::vector<double>* factor = nullptr);

struct VarSpec {
    std::vector<std::string> names;
    Eigen::VectorXd intercept;
    std::vector<Eigen::MatrixXd> phi;
    std::vector<std::string> exog_names; // exogenous columns are iid standard normal
    Eigen::MatrixXd gamma;               // n x q
    Eigen::MatrixXd shock_cov;           // n x n, may be zero
    int horizon = 1000;
    std::uint64_t seed = 1;
    Date start = Date{std::chrono::year{2000} / 1 / 1};
    int burn_in = 500;
    /// State before burn-in (all p lags); defaults to the unconditional mean.
    std::optional<Eigen::VectorXd> initial;
};

struct VarWorld {
    var::StatePanel panel;
    std::optional<var::StatePanel> exog;
    var::VarModel truth;
};

/// Simulates the spec after discarding `burn_in` steps. Throws UnstableSpec
/// when the companion matrix has an eigenvalue of modulus >= 1.
VarWorld gen_var_panel(const VarSpec& spec);

/// Sentiment -> implied vol world. A white-noise high-frequency sentiment
/// component loads on the next day's at-the-money cells; a slow AR(1)
/// low-frequency component does not. The grid cells follow
///   y(t+1) = mean + persistence (y(t) - mean) + loading * hfs(t) e_atm + noise.
struct PlantedSpec {
    int horizon = 2000;
    std::uint64_t seed = 1;
    Date start = Date{std::chrono::year{2015} / 1 / 1};
    double loading = 0.3;
    double persistence = 0.7;
    double iv_noise = 0.004;
    double hfs_sd = 0.02;
    double lfs_persistence = 0.995;
    double lfs_sd = 0.04; // stationary sd
    double proxy_noise = 0.1;
    double vol_level = 0.2;
    double smirk_slope = 0.3;
    double term_slope = 0.01; // vol per year of maturity
    var::Selection selection;
    double atm_level = 0.975;
    OptionWorldSpec options; // horizon, seed and start are overridden
};

struct PlantedWorld {
    VarWorld cells;     // 12 grid cells, then hfs, then lfs (latent)
    OptionWorld options;
    ProxyWorld proxies; // factor = hfs + lfs
};

PlantedWorld gen_planted(const PlantedSpec& spec, const surface::GridConfig& grid = {});

/// Vol function that reproduces a per-day table of cells on a maturity x
/// moneyness selection: quadratic in moneyness through each maturity's three
/// levels, linear total variance between maturities, flat beyond.
VolFunction cell_vol_function(const var::StatePanel& cells, const var::Selection& selection);

} // namespace sentivol::synth
