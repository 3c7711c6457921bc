#include "sentivol/black_scholes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace sentivol::surface {

double norm_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double norm_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

namespace {

void check_inputs(double spot, double strike, double tau, double sigma) {
    if (!(spot > 0.0) || !(strike > 0.0) || !(tau > 0.0) || !(sigma >= 0.0)) {
        std::ostringstream ss;
        ss << "S=" << spot << " K=" << strike << " tau=" << tau << " sigma=" << sigma;
        fail(ErrorCode::NonPositiveInput, ss.str());
    }
}

} // namespace

double bs_price(double spot, double strike, double rate, double tau, double sigma, OptionKind kind) {
    check_inputs(spot, strike, tau, sigma);
    const double discounted_strike = strike * std::exp(-rate * tau);
    if (sigma == 0.0) {
        return kind == OptionKind::Call ? std::max(spot - discounted_strike, 0.0)
                                        : std::max(discounted_strike - spot, 0.0);
    }
    const double vol_sqrt_t = sigma * std::sqrt(tau);
    const double d1 = (std::log(spot / strike) + (rate + 0.5 * sigma * sigma) * tau) / vol_sqrt_t;
    const double d2 = d1 - vol_sqrt_t;
    // Far from the money both terms underflow together and their difference can
    // round below the intrinsic floor; the floor is the exact limit there.
    if (kind == OptionKind::Call) {
        return std::max(spot * norm_cdf(d1) - discounted_strike * norm_cdf(d2),
                        std::max(spot - discounted_strike, 0.0));
    }
    return std::max(discounted_strike * norm_cdf(-d2) - spot * norm_cdf(-d1), std::max(discounted_strike - spot, 0.0));
}

double bs_vega(double spot, double strike, double rate, double tau, double sigma) {
    check_inputs(spot, strike, tau, sigma);
    if (sigma == 0.0) {
        return 0.0;
    }
    const double sqrt_t = std::sqrt(tau);
    const double d1 = (std::log(spot / strike) + (rate + 0.5 * sigma * sigma) * tau) / (sigma * sqrt_t);
    return spot * norm_pdf(d1) * sqrt_t;
}

double implied_vol(double price, double spot, double strike, double rate, double tau, OptionKind kind,
                   const ImpliedVolConfig& config) {
    check_inputs(spot, strike, tau, 0.0);
    const double discounted_strike = strike * std::exp(-rate * tau);
    const double lower_bound = kind == OptionKind::Call ? std::max(spot - discounted_strike, 0.0)
                                                        : std::max(discounted_strike - spot, 0.0);
    const double upper_bound = kind == OptionKind::Call ? spot : discounted_strike;
    if (!(price > lower_bound) || !(price < upper_bound)) {
        std::ostringstream ss;
        ss << "price " << price << " outside (" << lower_bound << ", " << upper_bound << ")";
        fail(ErrorCode::PriceOutOfBounds, ss.str());
    }

    // Log-price residual: monotone in sigma like the price itself, but it keeps
    // relative precision for far out-of-the-money prices many decades below 1.
    const double log_price = std::log(price);
    auto objective = [&](double sigma) {
        return std::log(bs_price(spot, strike, rate, tau, sigma, kind)) - log_price;
    };

    double lo = config.sigma_lower;
    double hi = config.sigma_upper;
    if (objective(hi) < 0.0 || objective(lo) > 0.0) {
        std::ostringstream ss;
        ss << "no volatility in [" << lo << ", " << hi << "] reproduces price " << price;
        fail(ErrorCode::NoConvergence, ss.str());
    }

    // Brenner-Subrahmanyam: sigma ~ sqrt(2 pi / tau) * price / S near the money.
    double sigma = std::sqrt(2.0 * std::numbers::pi / tau) * price / spot;
    sigma = std::clamp(sigma, std::max(lo, 0.01), std::min(hi, 2.0));

    double residual = objective(sigma);
    bool converged = false;
    for (int iter = 0; iter < config.max_iterations && !converged; ++iter) {
        if (residual == 0.0) {
            converged = true;
            break;
        }
        if (residual < 0.0) {
            lo = sigma;
        } else {
            hi = sigma;
        }
        // d/dsigma log(price) = vega / price.
        const double slope = bs_vega(spot, strike, rate, tau, sigma) / bs_price(spot, strike, rate, tau, sigma, kind);
        double next = 0.5 * (lo + hi);
        if (slope > 0.0 && std::isfinite(slope)) {
            const double newton = sigma - residual / slope;
            if (newton > lo && newton < hi) {
                next = newton;
            }
        }
        const bool step_tiny = std::abs(next - sigma) <= 4.0 * std::numeric_limits<double>::epsilon() * sigma;
        const bool bracket_tiny = hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi;
        sigma = next;
        residual = objective(sigma);
        converged = step_tiny || bracket_tiny;
    }
    const double price_residual = bs_price(spot, strike, rate, tau, sigma, kind) - price;
    if (!converged || !(std::abs(price_residual) <= config.price_tolerance)) {
        std::ostringstream ss;
        ss << "sigma " << sigma << " with price residual " << price_residual << " after " << config.max_iterations
           << " iterations";
        fail(ErrorCode::NoConvergence, ss.str());
    }
    return sigma;
}

} // namespace sentivol::surface
