#include "sentivol/spline.hpp"

#include "sentivol/error.hpp"

#include <algorithm>

namespace sentivol {

CubicSpline::CubicSpline(std::span<const double> x, std::span<const double> y, Extrapolation extrapolation)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()), y2_(x.size(), 0.0), extrapolation_(extrapolation) {
    const std::size_t n = x_.size();
    if (n != y_.size()) {
        fail(ErrorCode::InvariantViolation, "spline abscissa/ordinate length mismatch");
    }
    if (n < 2) {
        fail(ErrorCode::TooFewPoints, "spline needs at least two knots");
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!(x_[i] > x_[i - 1])) {
            fail(ErrorCode::InvariantViolation, "spline knots must be strictly increasing");
        }
    }
    if (n == 2) {
        return;
    }
    // Tridiagonal solve for the second derivatives, natural end conditions.
    std::vector<double> u(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double sig = (x_[i] - x_[i - 1]) / (x_[i + 1] - x_[i - 1]);
        const double p = sig * y2_[i - 1] + 2.0;
        y2_[i] = (sig - 1.0) / p;
        const double slope_diff =
            (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]) - (y_[i] - y_[i - 1]) / (x_[i] - x_[i - 1]);
        u[i] = (6.0 * slope_diff / (x_[i + 1] - x_[i - 1]) - sig * u[i - 1]) / p;
    }
    y2_[n - 1] = 0.0;
    for (std::size_t k = n - 1; k-- > 0;) {
        y2_[k] = y2_[k] * y2_[k + 1] + u[k];
    }
    y2_[0] = 0.0;
}

double CubicSpline::operator()(double x) const {
    const std::size_t n = x_.size();
    if (extrapolation_ == Extrapolation::Clamp) {
        if (x <= x_.front()) {
            return y_.front();
        }
        if (x >= x_.back()) {
            return y_.back();
        }
    }
    // Interval [lo, lo+1] with x_[lo] <= x; a knot hit lands on the left end.
    std::size_t lo = 0;
    if (x >= x_.back()) {
        lo = n - 2;
    } else if (x > x_.front()) {
        const auto it = std::upper_bound(x_.begin(), x_.end(), x);
        lo = static_cast<std::size_t>(it - x_.begin()) - 1;
    }
    const std::size_t hi = lo + 1;
    const double h = x_[hi] - x_[lo];
    const double a = (x_[hi] - x) / h;
    const double b = (x - x_[lo]) / h;
    if (b == 0.0) {
        return y_[lo];
    }
    if (a == 0.0) {
        return y_[hi];
    }
    return a * y_[lo] + b * y_[hi] + ((a * a * a - a) * y2_[lo] + (b * b * b - b) * y2_[hi]) * (h * h) / 6.0;
}

} // namespace sentivol
