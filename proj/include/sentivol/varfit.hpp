#pragma once

#include "sentivol/series.hpp"
#include "sentivol/surface.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace sentivol::var {

/// Dated multivariate panel, one row per date, one column per named variable.
struct StatePanel {
    std::vector<Date> dates;
    std::vector<std::string> names;
    Eigen::MatrixXd values; // rows = dates, cols = names

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }
    /// Throws UnknownVariable.
    Eigen::Index index_of(std::string_view name) const;
    bool has(std::string_view name) const;
    /// Rows [begin, end).
    StatePanel slice(Eigen::Index begin, Eigen::Index end) const;
    /// Keeps only the named columns, in the given order.
    StatePanel select(const std::vector<std::string>& columns) const;
};

enum class StateForm { Parameter, NonParameter };

/// Grid points entering the non-parameter state vector.
struct Selection {
    std::vector<int> maturities_months{1, 3, 6, 12};
    std::vector<double> moneyness_levels{1.300, 0.975, 0.600};
};

std::string iv_variable_name(int maturity_months, double moneyness);

/// Non-parameter state: selected grid IVs (maturity-major), then hfs, then lfs.
/// Sentiment may be omitted (both null) for a surface-only panel. Throws
/// MisalignedDates unless all inputs share the same dates.
StatePanel build_state_panel(const std::vector<surface::IVSurfaceGrid>& surfaces, const SentimentSeries* hfs,
                             const SentimentSeries* lfs, const Selection& selection = {});

/// Parameter state: skews, curvatures, slopes, then hfs and lfs.
StatePanel build_state_panel(const std::vector<surface::SurfaceParamVector>& params,
                             const std::vector<int>& maturities_months, const std::vector<double>& moneyness_levels,
                             const SentimentSeries* hfs, const SentimentSeries* lfs);

/// Reduced-form VAR(p) with intercept and optional contemporaneous exogenous
/// regressors, estimated equation by equation with OLS.
struct VarModel {
    std::vector<std::string> names;
    std::vector<std::string> exog_names;
    int p = 1;
    Eigen::VectorXd intercept;
    std::vector<Eigen::MatrixXd> phi; // phi[k](i, j): lag k+1 of variable j in equation i
    Eigen::MatrixXd gamma;            // n x q
    Eigen::MatrixXd sigma;            // residual covariance, degrees-of-freedom adjusted
    Eigen::MatrixXd sigma_ml;         // residual cross-product / effective sample
    int sample_size = 0;              // effective observations (T - p)
    int dof = 0;                      // sample_size - regressors per equation

    /// Regressor rows: const, then lag 1 of every variable, ..., lag p, then exog.
    std::vector<std::string> regressor_names;
    Eigen::MatrixXd coef;       // regressors x equations
    Eigen::MatrixXd std_errors; // regressors x equations
    Eigen::MatrixXd t_stats;    // regressors x equations
    Eigen::MatrixXd residuals;  // sample_size x n

    /// Variables dropped because they were constant over the sample, with that constant.
    std::vector<std::pair<std::string, double>> dropped;
    std::vector<std::string> warnings;

    std::size_t n() const { return names.size(); }
    std::size_t q() const { return exog_names.size(); }
};

struct FitOptions {
    /// First panel row used (earlier rows ignored); lets several lag orders share a sample.
    Eigen::Index first_row = 0;
};

/// Throws InsufficientSample when T - p <= n p + q + 1, RankDeficient when the
/// regressor matrix loses rank. Constant endogenous variables and constant
/// exogenous columns are dropped with a warning.
VarModel fit_var(const StatePanel& panel, int p, const StatePanel* exog = nullptr, const FitOptions& options = {});

/// Regressor matrix used by fit_var (rows = effective observations).
Eigen::MatrixXd design_matrix(const StatePanel& panel, int p, const StatePanel* exog, Eigen::Index first_row = 0);

/// ln det(sigma_ml) + 2 (n^2 p + n + n q) / sample_size.
double aic(const VarModel& model);

struct LagSelection {
    int p = 1;
    std::vector<double> aic; // aic[p - 1]
};

/// AIC over p = 1..p_max on the common sample of the largest lag; ties go to
/// the smaller p.
LagSelection select_lag(const StatePanel& panel, int p_max = 8, const StatePanel* exog = nullptr);

/// Iterated predictions. `history` rows are chronological (last row most
/// recent), columns in model order, at least p rows. `exog_future` has one row
/// per step. Returns horizon x n.
Eigen::MatrixXd forecast(const VarModel& model, const Eigen::MatrixXd& history, int horizon,
                         const Eigen::MatrixXd* exog_future = nullptr);

/// One-step forecast of panel row `target_row` from the preceding p rows, in
/// panel column order. Variables the model dropped are predicted by their
/// constant; variables unknown to the model by their previous value.
Eigen::VectorXd forecast_next(const VarModel& model, const StatePanel& panel, Eigen::Index target_row,
                              const StatePanel* exog = nullptr);

struct IrfResult {
    std::string shock;
    std::vector<std::string> responses;
    Eigen::MatrixXd values; // (H + 1) x n
    bool orthogonalized = false;
};

/// Reduced-form (unit shock) or Cholesky-orthogonalized responses, horizons 0..H.
IrfResult irf(const VarModel& model, std::string_view shock, int horizon, bool orthogonalized = false);

/// MA coefficient matrices Psi_0..Psi_H.
std::vector<Eigen::MatrixXd> ma_coefficients(const VarModel& model, int horizon);

struct GrangerResult {
    double f_stat = 0.0;
    double p_value = 1.0;
    double df_num = 0.0;
    double df_den = 0.0;
    double rss_restricted = 0.0;
    double rss_unrestricted = 0.0;
};

/// F-test that the lags of `cause` add nothing to the `effect` equation of a
/// VAR(p) on all panel variables.
GrangerResult granger(const StatePanel& panel, const std::vector<std::string>& cause, std::string_view effect, int p);

struct Stability {
    bool stable = false;
    double max_modulus = 0.0;
};

Stability stability_check(const VarModel& model);
Eigen::MatrixXd companion_matrix(const VarModel& model);

/// model.json: names, p, intercept, phi (row-major per lag), gamma, sigma,
/// sample size, coefficient table with standard errors.
std::string write_model_json(const VarModel& model);
VarModel read_model_json(std::string_view text);

/// shock, response, horizon, value.
std::string write_irf_csv(const std::vector<IrfResult>& results);
std::string write_panel_csv(const StatePanel& panel);
StatePanel read_panel_csv(const std::filesystem::path& path);

} // namespace sentivol::var
