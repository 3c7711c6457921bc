#pragma once

#include <span>
#include <vector>

namespace sentivol {

/// Natural cubic spline through strictly increasing knots.
///
/// Evaluation at a knot returns the stored ordinate exactly. Affine data are
/// reproduced (second derivatives vanish up to rounding). Outside the knot
/// range the spline is either clamped to the edge value or continued by the
/// boundary cubic, depending on `Extrapolation`.
class CubicSpline {
public:
    enum class Extrapolation { Clamp, Extend };

    CubicSpline() = default;
    CubicSpline(std::span<const double> x, std::span<const double> y,
                Extrapolation extrapolation = Extrapolation::Clamp);

    double operator()(double x) const;

    std::size_t size() const { return x_.size(); }
    double front() const { return x_.front(); }
    double back() const { return x_.back(); }

private:
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> y2_;
    Extrapolation extrapolation_ = Extrapolation::Clamp;
};

} // namespace sentivol
