#include "sentivol/synthgen.hpp"

#include "sentivol/black_scholes.hpp"
#include "sentivol/error.hpp"
#include "sentivol/rng.hpp"
#include "sentivol/stats.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace sentivol::synth {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

std::vector<Date> weekdays_from(Date start, int horizon) {
    const TradingCalendar calendar;
    std::vector<Date> out;
    Date d = calendar.is_trading_day(start) ? start : calendar.next_trading_day(start);
    for (int i = 0; i < horizon; ++i) {
        out.push_back(d);
        d = calendar.next_trading_day(d);
    }
    return out;
}

OptionWorld gen_option_world(const OptionWorldSpec& spec, const surface::GridConfig& grid, const VolFunction& vol) {
    VolFunction sigma = vol;
    if (!sigma) {
        if (spec.scenario == "flat") {
            sigma = [level = spec.vol_level](std::size_t, double, double) { return level; };
        } else if (spec.scenario == "smirk") {
            sigma = [level = spec.vol_level, slope = spec.smirk_slope](std::size_t, double, double m) {
                return level + slope * std::max(0.0, 1.0 - m);
            };
        } else {
            fail(ErrorCode::ConfigError, "unknown option scenario '" + spec.scenario + "'");
        }
    }

    const TradingCalendar calendar;
    OptionWorld world;
    world.dates = weekdays_from(spec.start, spec.horizon);
    Rng rng(spec.seed);
    const double daily_sd = spec.spot_vol / std::sqrt(252.0);
    double spot = spec.spot0;

    const int n_strikes =
        static_cast<int>(std::floor((spec.moneyness_high - spec.moneyness_low) / spec.moneyness_step + 1e-9)) + 1;
    for (std::size_t day = 0; day < world.dates.size(); ++day) {
        const Date date = world.dates[day];
        if (day > 0) {
            spot *= std::exp(-0.5 * daily_sd * daily_sd + daily_sd * rng.normal());
        }
        world.spots.push_back(spot);
        world.rates.push_back(io::RatePoint{date, spec.rate});

        for (int days : spec.expiry_days) {
            Date expiry = date + std::chrono::days{days};
            if (!calendar.is_trading_day(expiry)) {
                expiry = calendar.next_trading_day(expiry);
            }
            const double tau = year_fraction(date, expiry);
            for (int s = 0; s < n_strikes; ++s) {
                const double m = spec.moneyness_low + s * spec.moneyness_step;
                const double strike = m * spot;
                const double iv = sigma(day, tau, m);
                const bool at_money = std::fabs(m - 1.0) < 1e-12;
                for (io::OptionKind kind : {io::OptionKind::Put, io::OptionKind::Call}) {
                    const bool otm = kind == io::OptionKind::Call ? m > 1.0 : m < 1.0;
                    if (!otm && !at_money) {
                        continue;
                    }
                    const double price = surface::bs_price(spot, strike, spec.rate, tau, iv, kind);
                    if (price >= spec.min_price) {
                        world.quotes.push_back(io::OptionQuote{date, expiry, strike, kind, price, spot});
                    }
                }
            }
        }

        surface::IVSurfaceGrid truth;
        truth.date = date;
        truth.maturities_months = grid.maturities_months;
        truth.moneyness_levels = grid.moneyness_levels;
        for (int months : grid.maturities_months) {
            for (double m : grid.moneyness_levels) {
                truth.values.push_back(sigma(day, months / 12.0, m));
            }
        }
        world.truth.push_back(std::move(truth));
    }
    return world;
}

ProxyWorld gen_proxy_panel(const ProxySpec& spec, const std::vector<double>* factor) {
    if (spec.loadings.size() != 3) {
        fail(ErrorCode::ConfigError, "three proxy loadings expected");
    }
    Rng rng(spec.seed);
    ProxyWorld world;
    world.factor.label = "factor";
    world.factor.dates = weekdays_from(spec.start, factor != nullptr ? static_cast<int>(factor->size()) : spec.horizon);
    const std::size_t n = world.factor.dates.size();
    if (factor != nullptr) {
        const double sd = n > 1 ? stats::stdev(*factor) : 1.0;
        for (double f : *factor) {
            world.factor.values.push_back(sd > 0.0 ? f / sd : f);
        }
    } else {
        const double rho = spec.factor_persistence;
        const double innovation = std::sqrt(1.0 - rho * rho);
        double f = rng.normal();
        for (std::size_t t = 0; t < n; ++t) {
            if (t > 0) {
                f = rho * f + innovation * rng.normal();
            }
            world.factor.values.push_back(f);
        }
    }

    auto& p = world.panel;
    for (std::size_t t = 0; t < n; ++t) {
        const double f = world.factor.values[t];
        const double x_adl = spec.loadings[0] * f + spec.noise * rng.normal();
        const double x_turn = spec.loadings[1] * f + spec.noise * rng.normal();
        const double x_cef = spec.loadings[2] * f + spec.noise * rng.normal();

        const long long half_spread = std::llround(250.0 * x_adl);
        p.dates.push_back(world.factor.dates[t]);
        p.n_up.push_back(std::clamp(1500 + half_spread, 0LL, 3000LL));
        p.n_down.push_back(std::clamp(1500 - half_spread, 0LL, 3000LL));
        const double float_cap = 5e11;
        p.float_cap.push_back(float_cap);
        p.volume.push_back(float_cap * std::max(0.0, 0.02 + 0.002 * x_turn));
        const double nav = 1.0 + 1e-4 * static_cast<double>(t);
        p.cef_nav.push_back(nav);
        p.cef_price.push_back(nav * (1.0 - (0.08 - 0.01 * x_cef)));
    }
    return world;
}

namespace {

MatrixXd companion(const std::vector<MatrixXd>& phi, Index n) {
    const auto p = static_cast<Index>(phi.size());
    MatrixXd a = MatrixXd::Zero(n * p, n * p);
    for (Index k = 0; k < p; ++k) {
        a.block(0, k * n, n, n) = phi[static_cast<std::size_t>(k)];
    }
    if (p > 1) {
        a.bottomLeftCorner(n * (p - 1), n * (p - 1)).setIdentity();
    }
    return a;
}

// Any matrix square root L with L L' = cov; zero for a zero matrix.
MatrixXd shock_factor(const MatrixXd& cov) {
    if (cov.isZero(0.0)) {
        return MatrixXd::Zero(cov.rows(), cov.cols());
    }
    const Eigen::LLT<MatrixXd> llt(cov);
    if (llt.info() == Eigen::Success) {
        return llt.matrixL();
    }
    const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(cov);
    if (eig.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff())) {
        fail(ErrorCode::UnstableSpec, "shock covariance is not positive semidefinite");
    }
    return eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

} // namespace

VarWorld gen_var_panel(const VarSpec& spec) {
    const auto n = static_cast<Index>(spec.names.size());
    const auto q = static_cast<Index>(spec.exog_names.size());
    const auto p = static_cast<int>(spec.phi.size());
    if (p < 1 || spec.intercept.size() != n || spec.shock_cov.rows() != n || spec.shock_cov.cols() != n) {
        fail(ErrorCode::ConfigError, "VAR spec dimensions are inconsistent");
    }
    for (const auto& m : spec.phi) {
        if (m.rows() != n || m.cols() != n) {
            fail(ErrorCode::ConfigError, "VAR spec dimensions are inconsistent");
        }
    }
    if (q > 0 && (spec.gamma.rows() != n || spec.gamma.cols() != q)) {
        fail(ErrorCode::ConfigError, "gamma must be n x q");
    }
    const MatrixXd comp = companion(spec.phi, n);
    const double modulus = Eigen::EigenSolver<MatrixXd>(comp, false).eigenvalues().cwiseAbs().maxCoeff();
    if (!(modulus < 1.0)) {
        fail(ErrorCode::UnstableSpec, "companion modulus " + std::to_string(modulus));
    }

    MatrixXd phi_sum = MatrixXd::Zero(n, n);
    for (const auto& m : spec.phi) {
        phi_sum += m;
    }
    const VectorXd mean = (MatrixXd::Identity(n, n) - phi_sum).lu().solve(spec.intercept);
    const MatrixXd shock = shock_factor(spec.shock_cov);

    Rng rng(spec.seed);
    // Most recent state first.
    std::vector<VectorXd> recent(static_cast<std::size_t>(p), mean);
    if (spec.initial) {
        if (spec.initial->size() != n * p) {
            fail(ErrorCode::ConfigError, "initial state must hold p stacked states");
        }
        for (int k = 0; k < p; ++k) {
            recent[static_cast<std::size_t>(k)] = spec.initial->segment(k * n, n);
        }
    }

    VarWorld world;
    world.panel.names = spec.names;
    world.panel.dates = weekdays_from(spec.start, spec.horizon);
    world.panel.values.resize(spec.horizon, n);
    if (q > 0) {
        world.exog.emplace();
        world.exog->names = spec.exog_names;
        world.exog->dates = world.panel.dates;
        world.exog->values.resize(spec.horizon, q);
    }

    VectorXd z(n);
    VectorXd x(q);
    for (int step = 0; step < spec.burn_in + spec.horizon; ++step) {
        VectorXd next = spec.intercept;
        for (int k = 0; k < p; ++k) {
            next.noalias() += spec.phi[static_cast<std::size_t>(k)] * recent[static_cast<std::size_t>(k)];
        }
        for (Index j = 0; j < q; ++j) {
            x(j) = rng.normal();
        }
        if (q > 0) {
            next.noalias() += spec.gamma * x;
        }
        for (Index j = 0; j < n; ++j) {
            z(j) = rng.normal();
        }
        next.noalias() += shock * z;
        recent.insert(recent.begin(), next);
        recent.pop_back();
        const int row = step - spec.burn_in;
        if (row >= 0) {
            world.panel.values.row(row) = next.transpose();
            if (q > 0) {
                world.exog->values.row(row) = x.transpose();
            }
        }
    }

    var::VarModel& truth = world.truth;
    truth.names = spec.names;
    truth.exog_names = spec.exog_names;
    truth.p = p;
    truth.intercept = spec.intercept;
    truth.phi = spec.phi;
    truth.gamma = q > 0 ? spec.gamma : MatrixXd(n, 0);
    truth.sigma = spec.shock_cov;
    truth.sigma_ml = spec.shock_cov;
    truth.sample_size = spec.horizon;
    truth.regressor_names.emplace_back("const");
    for (int lag = 1; lag <= p; ++lag) {
        for (const auto& name : spec.names) {
            truth.regressor_names.push_back(name + "(t-" + std::to_string(lag) + ")");
        }
    }
    for (const auto& name : spec.exog_names) {
        truth.regressor_names.push_back(name);
    }
    const Index k = 1 + n * p + q;
    truth.coef.resize(k, n);
    truth.coef.row(0) = spec.intercept.transpose();
    for (int lag = 0; lag < p; ++lag) {
        truth.coef.middleRows(1 + lag * n, n) = spec.phi[static_cast<std::size_t>(lag)].transpose();
    }
    if (q > 0) {
        truth.coef.bottomRows(q) = spec.gamma.transpose();
    }
    truth.std_errors = MatrixXd::Zero(k, n);
    truth.t_stats = MatrixXd::Zero(k, n);
    return world;
}

VolFunction cell_vol_function(const var::StatePanel& cells, const var::Selection& selection) {
    const std::size_t n_levels = selection.moneyness_levels.size();
    std::vector<Index> cols;
    for (int months : selection.maturities_months) {
        for (double m : selection.moneyness_levels) {
            cols.push_back(cells.index_of(var::iv_variable_name(months, m)));
        }
    }
    return [values = cells.values, cols, selection, n_levels](std::size_t day, double tau, double m) {
        const auto row = static_cast<Index>(day);
        // Lagrange polynomial through one maturity's levels.
        const auto smile = [&](std::size_t mi) {
            double sum = 0.0;
            for (std::size_t a = 0; a < n_levels; ++a) {
                double w = 1.0;
                for (std::size_t b = 0; b < n_levels; ++b) {
                    if (a != b) {
                        w *= (m - selection.moneyness_levels[b]) /
                             (selection.moneyness_levels[a] - selection.moneyness_levels[b]);
                    }
                }
                sum += w * values(row, cols[mi * n_levels + a]);
            }
            return std::clamp(sum, 0.02, 2.0);
        };
        const auto& mats = selection.maturities_months;
        const auto tau_of = [&](std::size_t i) { return mats[i] / 12.0; };
        if (tau <= tau_of(0)) {
            return smile(0);
        }
        if (tau >= tau_of(mats.size() - 1)) {
            return smile(mats.size() - 1);
        }
        std::size_t hi = 1;
        while (tau_of(hi) < tau) {
            ++hi;
        }
        const double t0 = tau_of(hi - 1);
        const double t1 = tau_of(hi);
        const double s0 = smile(hi - 1);
        const double s1 = smile(hi);
        const double w = (tau - t0) / (t1 - t0);
        const double total = (1.0 - w) * s0 * s0 * t0 + w * s1 * s1 * t1;
        return std::sqrt(total / tau);
    };
}

PlantedWorld gen_planted(const PlantedSpec& spec, const surface::GridConfig& grid) {
    const auto& sel = spec.selection;
    const auto n_iv = static_cast<Index>(sel.maturities_months.size() * sel.moneyness_levels.size());
    const Index n = n_iv + 2;
    const Index hfs = n_iv;
    const Index lfs = n_iv + 1;

    VarSpec v;
    v.horizon = spec.horizon;
    v.seed = spec.seed;
    v.start = spec.start;
    VectorXd mean = VectorXd::Zero(n);
    std::vector<Index> atm_cells;
    for (int months : sel.maturities_months) {
        for (double m : sel.moneyness_levels) {
            v.names.push_back(var::iv_variable_name(months, m));
            const auto i = static_cast<Index>(v.names.size() - 1);
            mean(i) = spec.vol_level + spec.smirk_slope * std::max(0.0, 1.0 - m) + spec.term_slope * months / 12.0;
            if (std::fabs(m - spec.atm_level) < 1e-9) {
                atm_cells.push_back(i);
            }
        }
    }
    v.names.emplace_back("hfs");
    v.names.emplace_back("lfs");

    MatrixXd phi = MatrixXd::Zero(n, n);
    phi.topLeftCorner(n_iv, n_iv).diagonal().setConstant(spec.persistence);
    phi(lfs, lfs) = spec.lfs_persistence;
    for (Index i : atm_cells) {
        phi(i, hfs) = spec.loading;
    }
    v.phi = {phi};
    v.intercept = (MatrixXd::Identity(n, n) - phi) * mean;
    v.shock_cov = MatrixXd::Zero(n, n);
    v.shock_cov.topLeftCorner(n_iv, n_iv).diagonal().setConstant(spec.iv_noise * spec.iv_noise);
    v.shock_cov(hfs, hfs) = spec.hfs_sd * spec.hfs_sd;
    v.shock_cov(lfs, lfs) = spec.lfs_sd * spec.lfs_sd * (1.0 - spec.lfs_persistence * spec.lfs_persistence);

    PlantedWorld world;
    world.cells = gen_var_panel(v);

    OptionWorldSpec o = spec.options;
    o.horizon = spec.horizon;
    o.seed = derive_seed(spec.seed, 1);
    o.start = spec.start;
    world.options = gen_option_world(o, grid, cell_vol_function(world.cells.panel, sel));

    std::vector<double> factor(static_cast<std::size_t>(spec.horizon));
    for (Index t = 0; t < world.cells.panel.rows(); ++t) {
        factor[static_cast<std::size_t>(t)] = world.cells.panel.values(t, hfs) + world.cells.panel.values(t, lfs);
    }
    ProxySpec ps;
    ps.horizon = spec.horizon;
    ps.seed = derive_seed(spec.seed, 2);
    ps.start = spec.start;
    ps.noise = spec.proxy_noise;
    world.proxies = gen_proxy_panel(ps, &factor);
    return world;
}

} // namespace sentivol::synth
