#include "sentivol/black_scholes.hpp"
#include "sentivol/error.hpp"
#include "sentivol/rng.hpp"
#include "sentivol/spline.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

using namespace sentivol;
using surface::bs_price;
using surface::implied_vol;
using surface::OptionKind;

namespace {

// Independent forward oracle in extended precision.
long double ref_cdf(long double x) {
    return 0.5L * std::erfc(-x / std::sqrt(2.0L));
}

long double ref_price(long double s, long double k, long double r, long double tau, long double sigma, bool call) {
    const long double sd = sigma * std::sqrt(tau);
    const long double d1 = (std::log(s / k) + (r + 0.5L * sigma * sigma) * tau) / sd;
    const long double d2 = d1 - sd;
    const long double df = std::exp(-r * tau);
    return call ? s * ref_cdf(d1) - k * df * ref_cdf(d2) : k * df * ref_cdf(-d2) - s * ref_cdf(-d1);
}

// Plain bisection on the oracle price to a price tolerance.
double ref_implied(double price, double s, double k, double r, double tau, bool call, double tol) {
    double lo = 1e-6;
    double hi = 5.0;
    for (int i = 0; i < 400; ++i) {
        const double mid = 0.5 * (lo + hi);
        const long double p = ref_price(s, k, r, tau, mid, call);
        if (std::fabs(static_cast<double>(p) - price) < tol) {
            return mid;
        }
        (p < price ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("zero-vol and boundary prices") {
    CHECK(bs_price(110, 100, 0, 1, 0, OptionKind::Call) == Catch::Approx(10.0).margin(1e-12));
    CHECK(bs_price(90, 100, 0, 1, 0, OptionKind::Call) == 0.0);
    CHECK(bs_price(100, 1e-12, 0.03, 1, 0.2, OptionKind::Call) == Catch::Approx(100.0).margin(1e-9));
    CHECK_THROWS_AS(bs_price(-1, 100, 0, 1, 0.2, OptionKind::Call), Error);
    CHECK_THROWS_AS(bs_price(100, 100, 0, 0, 0.2, OptionKind::Call), Error);
    CHECK_THROWS_AS(bs_price(100, 100, 0, 1, -0.1, OptionKind::Call), Error);
}

TEST_CASE("at-the-money call matches the extended-precision oracle") {
    const double oracle = static_cast<double>(ref_price(100, 100, 0, 1, 0.2, true));
    CHECK(oracle == Catch::Approx(7.9656).margin(5e-5));
    CHECK(bs_price(100, 100, 0, 1, 0.2, OptionKind::Call) == Catch::Approx(oracle).margin(1e-12));
}

TEST_CASE("prices agree with the oracle on random inputs") {
    Rng rng(21);
    for (int i = 0; i < 2000; ++i) {
        const double s = rng.uniform(1, 200);
        const double k = s * std::exp(rng.uniform(-0.7, 0.7));
        const double r = rng.uniform(-0.01, 0.1);
        const double tau = rng.uniform(0.02, 3);
        const double sigma = rng.uniform(0.05, 2);
        const bool call = rng.uniform() < 0.5;
        const double p = bs_price(s, k, r, tau, sigma, call ? OptionKind::Call : OptionKind::Put);
        CHECK(p == Catch::Approx(static_cast<double>(ref_price(s, k, r, tau, sigma, call))).margin(1e-10 * s));
    }
}

TEST_CASE("put-call parity and vega positivity on random inputs") {
    Rng rng(22);
    for (int i = 0; i < 5000; ++i) {
        const double s = rng.uniform(0.5, 300);
        const double k = s * std::exp(rng.uniform(-0.7, 0.7));
        const double r = rng.uniform(-0.02, 0.1);
        const double tau = rng.uniform(0.01, 3);
        const double sigma = rng.uniform(0.01, 2);
        const double c = bs_price(s, k, r, tau, sigma, OptionKind::Call);
        const double p = bs_price(s, k, r, tau, sigma, OptionKind::Put);
        CHECK(std::fabs(c - p - (s - k * std::exp(-r * tau))) <= 1e-10 * std::max(1.0, s));
        CHECK(surface::bs_vega(s, k, r, tau, sigma) >= 0.0);
        // Monotone in sigma up to rounding in the last bits of a price near S.
        CHECK(bs_price(s, k, r, tau, sigma * 1.01, OptionKind::Call) >= c - 8 * std::numeric_limits<double>::epsilon() * s);
    }
}

TEST_CASE("implied vol inversion examples") {
    const double price = bs_price(100, 90, 0.03, 0.5, 0.25, OptionKind::Call);
    CHECK(implied_vol(price, 100, 90, 0.03, 0.5, OptionKind::Call) == Catch::Approx(0.25).margin(1e-6));
    CHECK_THROWS_AS(implied_vol(5.0, 110, 100, 0, 1, OptionKind::Call), Error);
    CHECK_THROWS_AS(implied_vol(200.0, 110, 100, 0, 1, OptionKind::Call), Error);

    const double tau = 1.0 / 12.0;
    const double put = bs_price(100, 70, 0.02, tau, 0.6, OptionKind::Put);
    const double oracle = ref_implied(put, 100, 70, 0.02, tau, false, 1e-10);
    CHECK(oracle == Catch::Approx(0.6).margin(1e-5));
    CHECK(implied_vol(put, 100, 70, 0.02, tau, OptionKind::Put) == Catch::Approx(0.6).margin(1e-5));
}

TEST_CASE("round trip on random tuples") {
    Rng rng(23);
    double worst = 0.0;
    for (int i = 0; i < 3000; ++i) {
        const double s = rng.uniform(1, 200);
        const double k = s * std::exp(rng.uniform(-0.7, 0.7));
        const double r = rng.uniform(0, 0.08);
        const double tau = rng.uniform(0.25, 2);
        const double sigma = rng.uniform(0.05, 2);
        const OptionKind kind = k >= s ? OptionKind::Call : OptionKind::Put;
        const double p = bs_price(s, k, r, tau, sigma, kind);
        worst = std::max(worst, std::fabs(implied_vol(p, s, k, r, tau, kind) - sigma));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("natural spline reproduces nodes and affine data") {
    const std::vector<double> x{0.0, 0.5, 1.3, 2.0, 4.0};
    std::vector<double> y;
    for (double v : x) {
        y.push_back(2.0 - 3.0 * v);
    }
    const CubicSpline s(x, y);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(s(x[i]) == y[i]);
    }
    for (double q = 0.0; q <= 4.0; q += 0.037) {
        CHECK(s(q) == Catch::Approx(2.0 - 3.0 * q).margin(1e-12));
    }
}

TEST_CASE("natural spline matches the closed-form three-point case") {
    const std::vector<double> x{0.0, 1.0, 2.0};
    const std::vector<double> y{0.0, 1.0, 0.0};
    const CubicSpline s(x, y);
    // Interior second derivative -3; value at 0.5 is 0.5 + (0.125 - 0.5) * (-3) / 6.
    CHECK(s(0.5) == Catch::Approx(0.6875).margin(1e-14));
    CHECK(s(1.5) == Catch::Approx(0.6875).margin(1e-14));
}

TEST_CASE("spline extrapolation modes") {
    const std::vector<double> x{0.0, 1.0, 2.0};
    const std::vector<double> y{0.0, 1.0, 0.0};
    const CubicSpline clamp(x, y);
    CHECK(clamp(-1.0) == 0.0);
    CHECK(clamp(5.0) == 0.0);
    const CubicSpline extend(x, y, CubicSpline::Extrapolation::Extend);
    CHECK(extend(-0.1) != 0.0);
    CHECK_THROWS_AS(CubicSpline(std::vector<double>{0.0, 0.0}, std::vector<double>{1.0, 2.0}), Error);
}
