#include "nvsd/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "nvsd/common.hpp"

namespace nvsd::stats {

double mean(std::span<const double> v) {
    if (v.empty()) throw InvalidSampleError("mean of empty vector");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v) {
    if (v.size() < 2) throw InvalidSampleError("variance needs at least 2 values");
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) {
        const double d = x - m;
        ss += d * d;
    }
    return ss / static_cast<double>(v.size() - 1);
}

double sd(std::span<const double> v) { return std::sqrt(sample_variance(v)); }

double quantile(std::span<const double> v, double p) {
    if (v.empty()) throw InvalidSampleError("quantile of empty vector");
    if (p < 0.0 || p > 1.0) throw ConfigError("quantile level outside [0,1]");
    std::vector<double> s(v.begin(), v.end());
    std::sort(s.begin(), s.end());
    const double h = (static_cast<double>(s.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, s.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return s[lo] + frac * (s[hi] - s[lo]);
}

double iqr(std::span<const double> v) {
    return quantile(v, 0.75) - quantile(v, 0.25);
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw InvalidSampleError("pearson_r: mismatched or too-short vectors");
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double a = x[i] - mx;
        const double b = y[i] - my;
        sxy += a * b;
        sxx += a * a;
        syy += b * b;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw DegenerateInputError("pearson_r: constant input vector");
    double r = sxy / std::sqrt(sxx * syy);
    // rounding can push |r| a hair past 1
    return std::clamp(r, -1.0, 1.0);
}

double t_test_p_two_sided(double t, double df) {
    if (!(df > 0.0)) throw ConfigError("t test: df must be positive");
    if (std::isinf(t)) return 0.0;
    const boost::math::students_t dist(df);
    const double tail = boost::math::cdf(dist, -std::fabs(t));
    return std::min(1.0, 2.0 * tail);
}

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

namespace {

// Kolmogorov asymptotic tail Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda) {
    if (lambda < 1e-8) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        if (term < 1e-12) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

KsResult ks_uniform(std::span<const double> sample) {
    if (sample.empty()) throw InvalidSampleError("KS test on empty sample");
    std::vector<double> s(sample.begin(), sample.end());
    std::sort(s.begin(), s.end());
    const double n = static_cast<double>(s.size());
    double d = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double cdf = std::clamp(s[i], 0.0, 1.0);
        const double up = (static_cast<double>(i) + 1.0) / n - cdf;
        const double down = cdf - static_cast<double>(i) / n;
        d = std::max({d, up, down});
    }
    const double sn = std::sqrt(n);
    const double lambda = (sn + 0.12 + 0.11 / sn) * d;  // Stephens (1970)
    return {d, kolmogorov_q(lambda)};
}

double sign_test_greater_p(std::size_t n_successes, std::size_t n_failures) {
    const std::size_t n = n_successes + n_failures;
    if (n == 0) return 1.0;
    const boost::math::binomial dist(static_cast<double>(n), 0.5);
    if (n_successes == 0) return 1.0;
    // P(X >= k) = 1 - P(X <= k-1)
    return boost::math::cdf(boost::math::complement(
        dist, static_cast<double>(n_successes) - 1.0));
}

}  // namespace nvsd::stats
