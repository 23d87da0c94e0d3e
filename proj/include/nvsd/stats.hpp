#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nvsd::stats {

double mean(std::span<const double> v);

// Sample variance with the n-1 denominator.
double sample_variance(std::span<const double> v);

double sd(std::span<const double> v);

// Linear-interpolation quantile ("type 7"): q(p) = x[(n-1)p] interpolated on
// the sorted values. Fixed convention so IQR-normalized metrics are
// bit-reproducible.
double quantile(std::span<const double> v, double p);

double iqr(std::span<const double> v);

double pearson_r(std::span<const double> x, std::span<const double> y);

// Two-sided p-value of the t statistic with df degrees of freedom.
double t_test_p_two_sided(double t, double df);

// Standard normal CDF.
double norm_cdf(double z);

// One-sample Kolmogorov-Smirnov test against uniform(0,1).
// Returns {D, p} with the asymptotic p-value (Stephens' small-sample factor).
struct KsResult {
    double statistic;
    double p_value;
};
KsResult ks_uniform(std::span<const double> sample);

// One-sided sign test: p = P(Bin(n_successes + n_failures, 1/2) >= n_successes).
// Ties are dropped, as usual.
double sign_test_greater_p(std::size_t n_successes, std::size_t n_failures);

}  // namespace nvsd::stats
