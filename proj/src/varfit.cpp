#include "sentivol/varfit.hpp"

#include "sentivol/csv.hpp"
#include "sentivol/error.hpp"
#include "sentivol/stats.hpp"

#include "json.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace sentivol::var {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

Index StatePanel::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) {
            return static_cast<Index>(i);
        }
    }
    fail(ErrorCode::UnknownVariable, std::string(name));
}

bool StatePanel::has(std::string_view name) const {
    return std::find(names.begin(), names.end(), name) != names.end();
}

StatePanel StatePanel::slice(Index begin, Index end) const {
    StatePanel out;
    out.dates.assign(dates.begin() + begin, dates.begin() + end);
    out.names = names;
    out.values = values.middleRows(begin, end - begin);
    return out;
}

StatePanel StatePanel::select(const std::vector<std::string>& columns) const {
    StatePanel out;
    out.dates = dates;
    out.names = columns;
    out.values.resize(values.rows(), static_cast<Index>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) {
        out.values.col(static_cast<Index>(c)) = values.col(index_of(columns[c]));
    }
    return out;
}

std::string iv_variable_name(int maturity_months, double moneyness) {
    return "iv_" + surface::maturity_label(maturity_months) + "_" + surface::level_label(moneyness);
}

namespace {

void check_sentiment_dates(const std::vector<Date>& dates, const SentimentSeries* hfs, const SentimentSeries* lfs) {
    if ((hfs == nullptr) != (lfs == nullptr)) {
        fail(ErrorCode::MisalignedDates, "hfs and lfs must be given together");
    }
    for (const SentimentSeries* s : {hfs, lfs}) {
        if (s != nullptr && s->dates != dates) {
            fail(ErrorCode::MisalignedDates, "sentiment series '" + s->label + "' dates differ from the surface dates");
        }
    }
}

void append_sentiment(StatePanel& panel, Index col, const SentimentSeries* hfs, const SentimentSeries* lfs) {
    if (hfs == nullptr) {
        return;
    }
    panel.names.emplace_back("hfs");
    panel.names.emplace_back("lfs");
    for (Index t = 0; t < panel.values.rows(); ++t) {
        panel.values(t, col) = hfs->values[static_cast<std::size_t>(t)];
        panel.values(t, col + 1) = lfs->values[static_cast<std::size_t>(t)];
    }
}

} // namespace

StatePanel build_state_panel(const std::vector<surface::IVSurfaceGrid>& surfaces, const SentimentSeries* hfs,
                             const SentimentSeries* lfs, const Selection& selection) {
    StatePanel panel;
    for (const auto& s : surfaces) {
        panel.dates.push_back(s.date);
    }
    check_sentiment_dates(panel.dates, hfs, lfs);
    const Index n_iv = static_cast<Index>(selection.maturities_months.size() * selection.moneyness_levels.size());
    const Index n = n_iv + (hfs != nullptr ? 2 : 0);
    panel.values.resize(static_cast<Index>(surfaces.size()), n);
    for (int m : selection.maturities_months) {
        for (double k : selection.moneyness_levels) {
            panel.names.push_back(iv_variable_name(m, k));
        }
    }
    for (std::size_t t = 0; t < surfaces.size(); ++t) {
        const auto& s = surfaces[t];
        Index col = 0;
        for (int m : selection.maturities_months) {
            const auto mi = std::find(s.maturities_months.begin(), s.maturities_months.end(), m);
            if (mi == s.maturities_months.end()) {
                fail(ErrorCode::UnknownLevel, "maturity " + std::to_string(m) + "m not on the grid");
            }
            const auto i = static_cast<std::size_t>(mi - s.maturities_months.begin());
            for (double k : selection.moneyness_levels) {
                panel.values(static_cast<Index>(t), col++) = s.at(i, s.level_index(k));
            }
        }
    }
    append_sentiment(panel, n_iv, hfs, lfs);
    return panel;
}

StatePanel build_state_panel(const std::vector<surface::SurfaceParamVector>& params,
                             const std::vector<int>& maturities_months, const std::vector<double>& moneyness_levels,
                             const SentimentSeries* hfs, const SentimentSeries* lfs) {
    StatePanel panel;
    for (const auto& p : params) {
        panel.dates.push_back(p.date);
    }
    check_sentiment_dates(panel.dates, hfs, lfs);
    panel.names = surface::param_names(maturities_months, moneyness_levels);
    const auto n_params = static_cast<Index>(panel.names.size());
    panel.values.resize(static_cast<Index>(params.size()), n_params + (hfs != nullptr ? 2 : 0));
    for (std::size_t t = 0; t < params.size(); ++t) {
        const auto flat = params[t].flatten();
        if (static_cast<Index>(flat.size()) != n_params) {
            fail(ErrorCode::InvariantViolation, "parameter vector length does not match the grid axes");
        }
        for (Index c = 0; c < n_params; ++c) {
            panel.values(static_cast<Index>(t), c) = flat[static_cast<std::size_t>(c)];
        }
    }
    append_sentiment(panel, n_params, hfs, lfs);
    return panel;
}

MatrixXd design_matrix(const StatePanel& panel, int p, const StatePanel* exog, Index first_row) {
    const Index t_total = panel.rows();
    const Index n = panel.cols();
    const Index q = exog != nullptr ? exog->cols() : 0;
    const Index rows = t_total - first_row - p;
    if (rows <= 0) {
        fail(ErrorCode::InsufficientSample, "no observations after lags");
    }
    MatrixXd x(rows, 1 + n * p + q);
    for (Index r = 0; r < rows; ++r) {
        const Index t = first_row + p + r;
        x(r, 0) = 1.0;
        for (int lag = 1; lag <= p; ++lag) {
            x.row(r).segment(1 + (lag - 1) * n, n) = panel.values.row(t - lag);
        }
        if (q > 0) {
            x.row(r).tail(q) = exog->values.row(t);
        }
    }
    return x;
}

namespace {

// Constant up to round-off relative to the column's magnitude.
bool is_constant(const Eigen::Ref<const VectorXd>& column) {
    if (column.size() == 0) {
        return true;
    }
    const double scale = std::max(1.0, column.cwiseAbs().maxCoeff());
    return column.maxCoeff() - column.minCoeff() <= 1e-10 * scale;
}

struct OlsFit {
    MatrixXd coef;
    MatrixXd residuals;
    MatrixXd xtx_inv;
};

OlsFit ols(const MatrixXd& x, const MatrixXd& y) {
    Eigen::ColPivHouseholderQR<MatrixXd> qr(x);
    qr.setThreshold(1e-10);
    const Index k = x.cols();
    if (qr.rank() < k) {
        fail(ErrorCode::RankDeficient, "regressor matrix rank " + std::to_string(qr.rank()) + " < " + std::to_string(k));
    }
    OlsFit fit;
    fit.coef = qr.solve(y);
    fit.residuals = y - x * fit.coef;
    const MatrixXd r = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
    const MatrixXd r_inv = r.triangularView<Eigen::Upper>().solve(MatrixXd::Identity(k, k));
    const MatrixXd inv_permuted = r_inv * r_inv.transpose();
    fit.xtx_inv = qr.colsPermutation() * inv_permuted * qr.colsPermutation().transpose();
    return fit;
}

} // namespace

VarModel fit_var(const StatePanel& panel, int p, const StatePanel* exog, const FitOptions& options) {
    if (p < 1) {
        fail(ErrorCode::ConfigError, "lag order must be >= 1");
    }
    if (exog != nullptr && exog->dates != panel.dates) {
        fail(ErrorCode::MisalignedDates, "exogenous dates differ from the state panel");
    }
    const Index first = options.first_row;
    const Index window = panel.rows() - first;

    VarModel model;
    model.p = p;
    std::vector<std::string> keep;
    for (Index c = 0; c < panel.cols(); ++c) {
        const auto col = panel.values.col(c).tail(std::max<Index>(window, 0));
        if (is_constant(col)) {
            const double value = window > 0 ? col(0) : 0.0;
            model.dropped.emplace_back(panel.names[static_cast<std::size_t>(c)], value);
            model.warnings.push_back("dropped constant variable " + panel.names[static_cast<std::size_t>(c)]);
        } else {
            keep.push_back(panel.names[static_cast<std::size_t>(c)]);
        }
    }
    if (keep.empty()) {
        // Nothing left to regress; forecasts reduce to the dropped constants.
        model.sample_size = static_cast<int>(std::max<Index>(window - p, 0));
        model.intercept.resize(0);
        model.gamma.resize(0, 0);
        model.sigma.resize(0, 0);
        model.sigma_ml.resize(0, 0);
        return model;
    }
    const StatePanel endo = keep.size() == panel.names.size() ? panel : panel.select(keep);

    std::optional<StatePanel> exo;
    if (exog != nullptr) {
        std::vector<std::string> keep_exog;
        for (Index c = 0; c < exog->cols(); ++c) {
            if (is_constant(exog->values.col(c).tail(std::max<Index>(window, 0)))) {
                model.warnings.push_back("dropped constant exogenous column " + exog->names[static_cast<std::size_t>(c)]);
            } else {
                keep_exog.push_back(exog->names[static_cast<std::size_t>(c)]);
            }
        }
        if (!keep_exog.empty()) {
            exo = exog->select(keep_exog);
        }
    }

    const auto n = static_cast<Index>(keep.size());
    const Index q = exo ? exo->cols() : 0;
    const Index k = 1 + n * p + q;
    const Index t_eff = window - p;
    if (t_eff <= k) {
        fail(ErrorCode::InsufficientSample, std::to_string(t_eff) + " effective observations for " + std::to_string(k) +
                                                " regressors per equation");
    }

    const MatrixXd x = design_matrix(endo, p, exo ? &*exo : nullptr, first);
    const MatrixXd y = endo.values.bottomRows(t_eff);
    const OlsFit fit = ols(x, y);

    model.names = keep;
    if (exo) {
        model.exog_names = exo->names;
    }
    model.sample_size = static_cast<int>(t_eff);
    model.dof = static_cast<int>(t_eff - k);
    model.coef = fit.coef;
    model.residuals = fit.residuals;
    model.intercept = fit.coef.row(0).transpose();
    for (int lag = 0; lag < p; ++lag) {
        model.phi.push_back(fit.coef.middleRows(1 + lag * n, n).transpose());
    }
    model.gamma = q > 0 ? MatrixXd(fit.coef.bottomRows(q).transpose()) : MatrixXd(n, 0);
    const MatrixXd cross = fit.residuals.transpose() * fit.residuals;
    model.sigma = cross / static_cast<double>(t_eff - k);
    model.sigma_ml = cross / static_cast<double>(t_eff);

    model.std_errors.resize(k, n);
    for (Index j = 0; j < k; ++j) {
        for (Index i = 0; i < n; ++i) {
            model.std_errors(j, i) = std::sqrt(std::max(0.0, model.sigma(i, i) * fit.xtx_inv(j, j)));
        }
    }
    model.t_stats = model.coef.cwiseQuotient(model.std_errors);

    model.regressor_names.emplace_back("const");
    for (int lag = 1; lag <= p; ++lag) {
        for (const auto& name : keep) {
            model.regressor_names.push_back(name + "(t-" + std::to_string(lag) + ")");
        }
    }
    for (const auto& name : model.exog_names) {
        model.regressor_names.push_back(name);
    }
    return model;
}

double aic(const VarModel& model) {
    const double n = static_cast<double>(model.n());
    const double q = static_cast<double>(model.q());
    const double params = n * n * model.p + n + n * q;
    return std::log(model.sigma_ml.determinant()) + 2.0 * params / model.sample_size;
}

LagSelection select_lag(const StatePanel& panel, int p_max, const StatePanel* exog) {
    if (p_max < 1) {
        fail(ErrorCode::ConfigError, "p_max must be >= 1");
    }
    LagSelection out;
    double best = std::numeric_limits<double>::infinity();
    for (int p = 1; p <= p_max; ++p) {
        const VarModel model = fit_var(panel, p, exog, FitOptions{p_max - p});
        const double value = aic(model);
        out.aic.push_back(value);
        if (value < best) {
            best = value;
            out.p = p;
        }
    }
    return out;
}

MatrixXd forecast(const VarModel& model, const MatrixXd& history, int horizon, const MatrixXd* exog_future) {
    const auto n = static_cast<Index>(model.n());
    if (n == 0) {
        return MatrixXd(horizon, 0);
    }
    if (history.cols() != n || history.rows() < model.p) {
        fail(ErrorCode::InsufficientSample, "history needs >= p rows in model variable order");
    }
    if (model.q() > 0 && (exog_future == nullptr || exog_future->rows() < horizon ||
                          exog_future->cols() != static_cast<Index>(model.q()))) {
        fail(ErrorCode::MissingExogenous, "model has exogenous regressors; provide one row per forecast step");
    }
    // Rolling buffer of the last p states, most recent first.
    std::vector<VectorXd> recent;
    for (int lag = 1; lag <= model.p; ++lag) {
        recent.push_back(history.row(history.rows() - lag).transpose());
    }
    MatrixXd out(horizon, n);
    for (int h = 0; h < horizon; ++h) {
        VectorXd next = model.intercept;
        for (int lag = 0; lag < model.p; ++lag) {
            next.noalias() += model.phi[static_cast<std::size_t>(lag)] * recent[static_cast<std::size_t>(lag)];
        }
        if (model.q() > 0) {
            next.noalias() += model.gamma * exog_future->row(h).transpose();
        }
        out.row(h) = next.transpose();
        recent.insert(recent.begin(), next);
        recent.pop_back();
    }
    return out;
}

VectorXd forecast_next(const VarModel& model, const StatePanel& panel, Index target_row, const StatePanel* exog) {
    if (target_row < model.p || target_row >= panel.rows() + 1) {
        fail(ErrorCode::InsufficientSample, "not enough history before the target row");
    }
    const auto n = static_cast<Index>(model.n());
    MatrixXd history(model.p, n);
    for (Index c = 0; c < n; ++c) {
        const Index src = panel.index_of(model.names[static_cast<std::size_t>(c)]);
        history.col(c) = panel.values.col(src).segment(target_row - model.p, model.p);
    }
    MatrixXd exog_row;
    if (model.q() > 0) {
        if (exog == nullptr || target_row >= exog->rows()) {
            fail(ErrorCode::MissingExogenous, "exogenous values for the target date are required");
        }
        exog_row.resize(1, static_cast<Index>(model.q()));
        for (std::size_t c = 0; c < model.q(); ++c) {
            exog_row(0, static_cast<Index>(c)) = exog->values(target_row, exog->index_of(model.exog_names[c]));
        }
    }
    const MatrixXd pred = forecast(model, history, 1, model.q() > 0 ? &exog_row : nullptr);

    VectorXd out = panel.values.row(target_row - 1).transpose();
    for (Index c = 0; c < n; ++c) {
        out(panel.index_of(model.names[static_cast<std::size_t>(c)])) = pred(0, c);
    }
    for (const auto& [name, value] : model.dropped) {
        if (panel.has(name)) {
            out(panel.index_of(name)) = value;
        }
    }
    return out;
}

std::vector<MatrixXd> ma_coefficients(const VarModel& model, int horizon) {
    const auto n = static_cast<Index>(model.n());
    std::vector<MatrixXd> psi;
    psi.push_back(MatrixXd::Identity(n, n));
    for (int h = 1; h <= horizon; ++h) {
        MatrixXd next = MatrixXd::Zero(n, n);
        for (int k = 1; k <= std::min(h, model.p); ++k) {
            next.noalias() += model.phi[static_cast<std::size_t>(k - 1)] * psi[static_cast<std::size_t>(h - k)];
        }
        psi.push_back(std::move(next));
    }
    return psi;
}

IrfResult irf(const VarModel& model, std::string_view shock, int horizon, bool orthogonalized) {
    const auto it = std::find(model.names.begin(), model.names.end(), shock);
    if (it == model.names.end()) {
        fail(ErrorCode::UnknownVariable, std::string(shock));
    }
    const auto j = static_cast<Index>(it - model.names.begin());
    const auto n = static_cast<Index>(model.n());
    VectorXd impulse = VectorXd::Zero(n);
    impulse(j) = 1.0;
    if (orthogonalized) {
        const Eigen::LLT<MatrixXd> llt(model.sigma);
        if (llt.info() != Eigen::Success) {
            fail(ErrorCode::RankDeficient, "residual covariance is not positive definite");
        }
        const MatrixXd lower = llt.matrixL();
        impulse = lower.col(j);
    }
    IrfResult out;
    out.shock = std::string(shock);
    out.responses = model.names;
    out.orthogonalized = orthogonalized;
    out.values.resize(horizon + 1, n);
    const auto psi = ma_coefficients(model, horizon);
    for (int h = 0; h <= horizon; ++h) {
        out.values.row(h) = (psi[static_cast<std::size_t>(h)] * impulse).transpose();
    }
    return out;
}

GrangerResult granger(const StatePanel& panel, const std::vector<std::string>& cause, std::string_view effect, int p) {
    if (cause.empty()) {
        fail(ErrorCode::ConfigError, "empty cause set");
    }
    const Index effect_idx = panel.index_of(effect);
    std::set<Index> cause_idx;
    for (const auto& c : cause) {
        cause_idx.insert(panel.index_of(c));
    }
    const Index n = panel.cols();
    const MatrixXd x_u = design_matrix(panel, p, nullptr, 0);
    const Index t_eff = x_u.rows();
    const VectorXd y = panel.values.col(effect_idx).tail(t_eff);

    std::vector<Index> keep{0};
    for (int lag = 1; lag <= p; ++lag) {
        for (Index j = 0; j < n; ++j) {
            if (!cause_idx.contains(j)) {
                keep.push_back(1 + (lag - 1) * n + j);
            }
        }
    }
    MatrixXd x_r(t_eff, static_cast<Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
        x_r.col(static_cast<Index>(c)) = x_u.col(keep[c]);
    }
    const Index k_u = x_u.cols();
    if (t_eff <= k_u) {
        fail(ErrorCode::InsufficientSample, "too few observations for the unrestricted regression");
    }
    const OlsFit fu = ols(x_u, y);
    const OlsFit fr = ols(x_r, y);

    GrangerResult out;
    out.rss_unrestricted = fu.residuals.squaredNorm();
    out.rss_restricted = fr.residuals.squaredNorm();
    out.df_num = static_cast<double>(p) * static_cast<double>(cause_idx.size());
    out.df_den = static_cast<double>(t_eff - k_u);
    out.f_stat = ((out.rss_restricted - out.rss_unrestricted) / out.df_num) / (out.rss_unrestricted / out.df_den);
    out.p_value = stats::f_upper_p(out.f_stat, out.df_num, out.df_den);
    return out;
}

MatrixXd companion_matrix(const VarModel& model) {
    const auto n = static_cast<Index>(model.n());
    const Index np = n * model.p;
    MatrixXd a = MatrixXd::Zero(np, np);
    for (int k = 0; k < model.p; ++k) {
        a.block(0, k * n, n, n) = model.phi[static_cast<std::size_t>(k)];
    }
    if (model.p > 1) {
        a.bottomLeftCorner(np - n, np - n).setIdentity();
    }
    return a;
}

Stability stability_check(const VarModel& model) {
    const Eigen::EigenSolver<MatrixXd> solver(companion_matrix(model), false);
    Stability out;
    out.max_modulus = solver.eigenvalues().cwiseAbs().maxCoeff();
    out.stable = out.max_modulus < 1.0;
    return out;
}

namespace {

using ojson = nlohmann::ordered_json;

ojson matrix_json(const MatrixXd& m) {
    ojson rows = ojson::array();
    for (Index i = 0; i < m.rows(); ++i) {
        ojson row = ojson::array();
        for (Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

MatrixXd matrix_from(const ojson& j, Index rows, Index cols) {
    MatrixXd m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index c = 0; c < cols; ++c) {
            m(i, c) = j.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(c)).get<double>();
        }
    }
    return m;
}

} // namespace

std::string write_model_json(const VarModel& model) {
    ojson j;
    j["variables"] = model.names;
    j["exogenous"] = model.exog_names;
    j["p"] = model.p;
    j["layout"] = "phi[k][i][j]: coefficient of variable j at lag k+1 in equation i; gamma[i][m]: exogenous m in equation i";
    j["intercept"] = std::vector<double>(model.intercept.data(), model.intercept.data() + model.intercept.size());
    ojson phi = ojson::array();
    for (const auto& m : model.phi) {
        phi.push_back(matrix_json(m));
    }
    j["phi"] = std::move(phi);
    j["gamma"] = matrix_json(model.gamma);
    j["sigma"] = matrix_json(model.sigma);
    j["sigma_ml"] = matrix_json(model.sigma_ml);
    j["sample_size"] = model.sample_size;
    j["dof"] = model.dof;
    j["regressors"] = model.regressor_names;
    j["coef"] = matrix_json(model.coef);
    j["std_errors"] = matrix_json(model.std_errors);
    ojson dropped = ojson::array();
    for (const auto& [name, value] : model.dropped) {
        dropped.push_back(ojson{{"name", name}, {"value", value}});
    }
    j["dropped"] = std::move(dropped);
    j["warnings"] = model.warnings;
    return j.dump(2) + "\n";
}

VarModel read_model_json(std::string_view text) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const std::exception& e) {
        fail(ErrorCode::SchemaMismatch, std::string("model.json: ") + e.what());
    }
    try {
        VarModel m;
        m.names = j.at("variables").get<std::vector<std::string>>();
        m.exog_names = j.at("exogenous").get<std::vector<std::string>>();
        m.p = j.at("p").get<int>();
        const auto n = static_cast<Index>(m.names.size());
        const auto q = static_cast<Index>(m.exog_names.size());
        const auto intercept = j.at("intercept").get<std::vector<double>>();
        m.intercept = Eigen::Map<const VectorXd>(intercept.data(), static_cast<Index>(intercept.size()));
        for (const auto& lag : j.at("phi")) {
            m.phi.push_back(matrix_from(lag, n, n));
        }
        m.gamma = matrix_from(j.at("gamma"), n, q);
        m.sigma = matrix_from(j.at("sigma"), n, n);
        m.sigma_ml = matrix_from(j.at("sigma_ml"), n, n);
        m.sample_size = j.at("sample_size").get<int>();
        m.dof = j.at("dof").get<int>();
        m.regressor_names = j.at("regressors").get<std::vector<std::string>>();
        const auto k = static_cast<Index>(m.regressor_names.size());
        m.coef = matrix_from(j.at("coef"), k, n);
        m.std_errors = matrix_from(j.at("std_errors"), k, n);
        m.t_stats = m.coef.cwiseQuotient(m.std_errors);
        for (const auto& d : j.at("dropped")) {
            m.dropped.emplace_back(d.at("name").get<std::string>(), d.at("value").get<double>());
        }
        m.warnings = j.at("warnings").get<std::vector<std::string>>();
        return m;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::SchemaMismatch, std::string("model.json: ") + e.what());
    }
}

std::string write_irf_csv(const std::vector<IrfResult>& results) {
    std::string out = "shock,response,horizon,value\n";
    for (const auto& r : results) {
        for (std::size_t v = 0; v < r.responses.size(); ++v) {
            for (Index h = 0; h < r.values.rows(); ++h) {
                out += r.shock + "," + r.responses[v] + "," + std::to_string(h) + "," +
                       format_double(r.values(h, static_cast<Index>(v))) + "\n";
            }
        }
    }
    return out;
}

std::string write_panel_csv(const StatePanel& panel) {
    std::string out = "date";
    for (const auto& name : panel.names) {
        out += "," + name;
    }
    out += "\n";
    for (Index t = 0; t < panel.rows(); ++t) {
        out += format_date(panel.dates[static_cast<std::size_t>(t)]);
        for (Index c = 0; c < panel.cols(); ++c) {
            out += "," + format_double(panel.values(t, c));
        }
        out += "\n";
    }
    return out;
}

StatePanel read_panel_csv(const std::filesystem::path& path) {
    const CsvTable table = read_csv(path);
    const std::size_t c_date = table.require_column("date");
    StatePanel panel;
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (c != c_date) {
            panel.names.push_back(table.header[c]);
            cols.push_back(c);
        }
    }
    panel.values.resize(static_cast<Index>(table.rows.size()), static_cast<Index>(cols.size()));
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto d = parse_date(table.rows[r][c_date]);
        if (!d) {
            fail(ErrorCode::UnparsableValue, path.string() + " line " + std::to_string(table.line_numbers[r]));
        }
        panel.dates.push_back(*d);
        for (std::size_t c = 0; c < cols.size(); ++c) {
            double v = 0.0;
            if (!parse_double(table.rows[r][cols[c]], v)) {
                fail(ErrorCode::UnparsableValue, path.string() + " line " + std::to_string(table.line_numbers[r]));
            }
            panel.values(static_cast<Index>(r), static_cast<Index>(c)) = v;
        }
    }
    return panel;
}

} // namespace sentivol::var
