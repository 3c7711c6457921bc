#pragma once

#include <span>

namespace sentivol::stats {

double mean(std::span<const double> x);
/// Sample variance (n - 1 denominator).
double variance(std::span<const double> x);
double stdev(std::span<const double> x);
double correlation(std::span<const double> x, std::span<const double> y);

/// Two-sided p-value of a one-sample t-test of mean zero.
double t_test_mean_zero(std::span<const double> x);

double student_t_two_sided_p(double t, double dof);
/// Upper-tail probability of an F(d1, d2) statistic.
double f_upper_p(double f, double d1, double d2);
/// Two-sided critical value |t| for significance level alpha; dof <= 0 means normal.
double two_sided_critical(double alpha, double dof);

} // namespace sentivol::stats
