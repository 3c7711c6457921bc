#pragma once

#include "sentivol/black_scholes.hpp"
#include "sentivol/calendar.hpp"
#include "sentivol/data_io.hpp"

#include <span>
#include <string>
#include <vector>

namespace sentivol::surface {

struct IVPoint {
    double tau = 0.0;       // years
    double moneyness = 0.0; // K / S
    double iv = 0.0;
};

/// Which option side is inverted at each strike.
enum class SidePolicy {
    OutOfTheMoney, // calls for K/S >= 1, puts below; falls back to the other side when missing
    CallsOnly,
    PutsOnly,
};

struct GridConfig {
    std::vector<int> maturities_months{1, 3, 6, 12};
    std::vector<double> moneyness_levels{1.300, 1.100, 1.025, 1.000, 0.975, 0.900, 0.600};
    SidePolicy side = SidePolicy::OutOfTheMoney;
    int min_strikes_per_expiry = 4;
    double max_iv = 5.0;
    ImpliedVolConfig inversion;

    /// Seven moneyness levels including the money.
    static GridConfig default7();
    /// Six moneyness levels, 24 points.
    static GridConfig paper24();
};

/// Implied vols on a fixed maturity x moneyness grid, stored row-major by maturity.
struct IVSurfaceGrid {
    Date date;
    std::vector<int> maturities_months;
    std::vector<double> moneyness_levels;
    std::vector<double> values;

    double at(std::size_t maturity, std::size_t level) const {
        return values[maturity * moneyness_levels.size() + level];
    }
    double& at(std::size_t maturity, std::size_t level) { return values[maturity * moneyness_levels.size() + level]; }
    double tau(std::size_t maturity) const { return maturities_months[maturity] / 12.0; }
    std::size_t level_index(double moneyness) const; // throws UnknownLevel

    /// Throws SurfaceInvariant on bad dimensions or entries outside (0, max_iv).
    void validate(double max_iv = 5.0) const;
};

struct BuildDiagnostics {
    int quotes_considered = 0;
    int inversion_failures = 0;
    int expiries_used = 0;
    int expiries_dropped = 0;
};

struct BuildResult {
    IVSurfaceGrid grid;
    std::vector<IVPoint> points;
    BuildDiagnostics diagnostics;
};

/// Inverts one date's quotes and interpolates the fixed grid.
///
/// Each expiry's smile is a natural cubic spline in moneyness (flat beyond the
/// quoted range). Grid maturities between two listed expiries use linear
/// interpolation of total variance sigma^2 * tau; outside the listed range the
/// nearest expiry's smile is used.
BuildResult build_grid(const std::vector<io::OptionQuote>& quotes, double rate, const GridConfig& config = {});

/// Grid construction from already-inverted points.
IVSurfaceGrid build_grid_from_points(Date date, const std::vector<IVPoint>& points, const GridConfig& config = {},
                                     BuildDiagnostics* diagnostics = nullptr);

/// Spline in moneyness per grid maturity, then spline in tau. With
/// `allow_extrapolation` the query is clamped to the grid hull, otherwise a
/// query outside throws OutOfHull.
double interpolate(const IVSurfaceGrid& surface, double tau, double moneyness, bool allow_extrapolation = true);

enum class CurvatureVariant {
    Standard,     // squared slope term, mean over the n-2 interior points
    PaperLiteral, // unsquared slope term, interior sum divided by n
};

/// Mean discrete curvature of a smile on a uniform strike ladder.
double smile_curvature(std::span<const double> strikes, std::span<const double> ivs,
                       CurvatureVariant variant = CurvatureVariant::Standard);

/// Third central moment over the second central moment to the 3/2.
double smile_skewness(std::span<const double> ivs);

/// OLS slope of iv against tau (years) across the grid maturities at one level.
double term_slope(const IVSurfaceGrid& surface, double moneyness);

struct ParamConfig {
    double ladder_low = 0.900;
    double ladder_high = 1.100;
    double ladder_step = 0.025;
    CurvatureVariant curvature = CurvatureVariant::Standard;
};

struct SurfaceParamVector {
    Date date;
    std::vector<double> skew_by_tau;
    std::vector<double> cur_by_tau;
    std::vector<double> slope_by_m;
    /// Rows whose smile had zero variance; their skew is reported as 0.
    std::vector<bool> degenerate_rows;

    /// skews, then curvatures, then slopes.
    std::vector<double> flatten() const;
};

SurfaceParamVector surface_params(const IVSurfaceGrid& surface, const ParamConfig& config = {});

/// "1m", "12m".
std::string maturity_label(int months);
/// Per-mille of spot, four digits: 0.975 -> "0975".
std::string level_label(double moneyness);
std::vector<std::string> param_names(const std::vector<int>& maturities_months,
                                     const std::vector<double>& moneyness_levels);

/// Long format: date, tau_months, moneyness, iv.
std::string write_surface_csv(const std::vector<IVSurfaceGrid>& surfaces);
std::vector<IVSurfaceGrid> read_surface_csv(const std::filesystem::path& path);
/// date, skew_*, cur_*, slope_*.
std::string write_params_csv(const std::vector<SurfaceParamVector>& params, const std::vector<int>& maturities_months,
                             const std::vector<double>& moneyness_levels);

} // namespace sentivol::surface
