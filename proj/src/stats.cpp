#include "sentivol/stats.hpp"

#include "sentivol/error.hpp"

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <numeric>

namespace sentivol::stats {

double mean(std::span<const double> x) {
    if (x.empty()) {
        fail(ErrorCode::Empty, "mean of empty sample");
    }
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
    if (x.size() < 2) {
        fail(ErrorCode::TooShort, "variance needs >= 2 observations");
    }
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) {
        ss += (v - m) * (v - m);
    }
    return ss / static_cast<double>(x.size() - 1);
}

double stdev(std::span<const double> x) {
    return std::sqrt(variance(x));
}

double correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        fail(ErrorCode::TooShort, "correlation needs two equal-length samples");
    }
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

double t_test_mean_zero(std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    const double sd = stdev(x);
    if (sd == 0.0) {
        return mean(x) == 0.0 ? 1.0 : 0.0;
    }
    const double t = mean(x) / (sd / std::sqrt(n));
    return student_t_two_sided_p(t, n - 1.0);
}

double student_t_two_sided_p(double t, double dof) {
    if (!std::isfinite(t)) {
        return 0.0;
    }
    const boost::math::students_t dist(dof);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

double f_upper_p(double f, double d1, double d2) {
    if (!(f > 0.0)) {
        return 1.0;
    }
    if (!std::isfinite(f)) {
        return 0.0;
    }
    const boost::math::fisher_f dist(d1, d2);
    return boost::math::cdf(boost::math::complement(dist, f));
}

double two_sided_critical(double alpha, double dof) {
    if (dof <= 0.0) {
        const boost::math::normal dist;
        return boost::math::quantile(boost::math::complement(dist, alpha / 2.0));
    }
    const boost::math::students_t dist(dof);
    return boost::math::quantile(boost::math::complement(dist, alpha / 2.0));
}

} // namespace sentivol::stats
