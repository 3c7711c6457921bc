#pragma once

#include "sentivol/data_io.hpp"

namespace sentivol::surface {

using io::OptionKind;

double norm_cdf(double x);
double norm_pdf(double x);

/// European Black-Scholes price, no dividends. sigma == 0 gives the
/// discounted intrinsic value. Throws NonPositiveInput on S, K, tau <= 0 or
/// sigma < 0.
double bs_price(double spot, double strike, double rate, double tau, double sigma, OptionKind kind);

/// dPrice/dSigma.
double bs_vega(double spot, double strike, double rate, double tau, double sigma);

struct ImpliedVolConfig {
    double sigma_lower = 1e-4;
    double sigma_upper = 5.0;
    int max_iterations = 100;
    /// Accepted absolute price residual at the solution.
    double price_tolerance = 1e-8;
};

/// Safeguarded Newton (on vega) with bisection fallback inside
/// [sigma_lower, sigma_upper], started from the Brenner-Subrahmanyam guess.
///
/// Throws PriceOutOfBounds when the price is not strictly inside the
/// no-arbitrage bounds, NoConvergence when no volatility in the bracket
/// reproduces it.
double implied_vol(double price, double spot, double strike, double rate, double tau, OptionKind kind,
                   const ImpliedVolConfig& config = {});

} // namespace sentivol::surface
