#include "nvsd/assoc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nvsd/common.hpp"
#include "nvsd/parallel.hpp"
#include "nvsd/rng.hpp"
#include "nvsd/stats.hpp"

namespace nvsd {

void PairedSample::validate() const {
    if (x.size() != y.size())
        throw InvalidSampleError("paired sample: |x| != |y|");
    if (x.size() < 3)
        throw InvalidSampleError("paired sample: need at least 3 points");
    for (double v : x)
        if (!std::isfinite(v)) throw InvalidSampleError("paired sample: non-finite x");
    for (double v : y)
        if (!std::isfinite(v)) throw InvalidSampleError("paired sample: non-finite y");
}

std::vector<std::uint32_t> sort_order(std::span<const double> x) {
    std::vector<std::uint32_t> order(x.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return x[a] < x[b]; });
    return order;
}

PairedSample sort_pairs(const PairedSample& s) {
    s.validate();
    const auto order = sort_order(s.x);
    PairedSample out;
    out.x.reserve(s.size());
    out.y.reserve(s.size());
    for (auto i : order) {
        out.x.push_back(s.x[i]);
        out.y.push_back(s.y[i]);
    }
    return out;
}

double s_delta(std::span<const double> y_sorted) {
    const std::size_t n = y_sorted.size();
    if (n < 3) throw InvalidSampleError("s_delta: need at least 3 points");
    double ss = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double d = y_sorted[i + 1] - y_sorted[i];
        ss += d * d;
    }
    return ss / (2.0 * static_cast<double>(n - 2));
}

double s_delta_ordered(std::span<const double> y,
                       std::span<const std::uint32_t> order) {
    const std::size_t n = y.size();
    if (n < 3) throw InvalidSampleError("s_delta: need at least 3 points");
    double ss = 0.0;
    double prev = y[order[0]];
    for (std::size_t i = 1; i < n; ++i) {
        const double cur = y[order[i]];
        const double d = cur - prev;
        ss += d * d;
        prev = cur;
    }
    return ss / (2.0 * static_cast<double>(n - 2));
}

double explained_fraction(std::span<const double> y_sorted) {
    const double var = stats::sample_variance(y_sorted);
    if (var <= 0.0)
        throw DegenerateResponseError("explained_fraction: constant response");
    return (var - s_delta(y_sorted)) / var;
}

namespace {

std::vector<double> null_impl(std::span<const double> y, std::size_t m,
                              std::uint64_t seed, int threads) {
    if (y.size() < 3)
        throw InvalidSampleError("permutation null: need at least 3 points");
    if (m < 1) throw ConfigError("permutation null: m must be >= 1");
    std::vector<double> null_stats(m);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
    for (long long j = 0; j < static_cast<long long>(m); ++j) {
        Rng rng(seed, static_cast<std::uint64_t>(j));
        std::vector<double> perm(y.begin(), y.end());
        rng.shuffle(perm);
        null_stats[static_cast<std::size_t>(j)] = s_delta(perm);
    }
    std::sort(null_stats.begin(), null_stats.end());
    return null_stats;
}

}  // namespace

std::vector<double> permutation_null(std::span<const double> y, std::size_t m,
                                     std::uint64_t seed) {
    return null_impl(y, m, seed, max_threads());
}

std::vector<double> permutation_null_threaded(std::span<const double> y,
                                              std::size_t m,
                                              std::uint64_t seed, int threads) {
    return null_impl(y, m, seed, threads);
}

namespace reference {
std::vector<double> permutation_null_serial(std::span<const double> y,
                                            std::size_t m, std::uint64_t seed) {
    return null_impl(y, m, seed, 1);
}
}  // namespace reference

std::span<const double> PermutationPlan::ensure_null(std::span<const double> y) {
    if (cached_null && cached_for_y.size() == y.size() &&
        std::equal(cached_for_y.begin(), cached_for_y.end(), y.begin())) {
        return *cached_null;
    }
    cached_null = permutation_null(y, m, seed);
    cached_for_y.assign(y.begin(), y.end());
    return *cached_null;
}

double permutation_p_from_null(double observed,
                               std::span<const double> sorted_null) {
    const auto count = static_cast<std::size_t>(
        std::upper_bound(sorted_null.begin(), sorted_null.end(), observed) -
        sorted_null.begin());
    return (1.0 + static_cast<double>(count)) /
           (static_cast<double>(sorted_null.size()) + 1.0);
}

double permutation_p(const PairedSample& s, PermutationPlan& plan) {
    s.validate();
    const auto sorted = sort_pairs(s);
    const double observed = s_delta(sorted.y);
    const auto null_stats = plan.ensure_null(s.y);
    return permutation_p_from_null(observed, null_stats);
}

double pearson_p(std::span<const double> x, std::span<const double> y) {
    const double r = stats::pearson_r(x, y);
    const double n = static_cast<double>(x.size());
    const double denom = 1.0 - r * r;
    if (denom <= 0.0) return 0.0;
    const double t = r * std::sqrt((n - 2.0) / denom);
    return stats::t_test_p_two_sided(t, n - 2.0);
}

double pearson_p(const PairedSample& s) {
    s.validate();
    return pearson_p(s.x, s.y);
}

double combined_p(double p_linear, double p_dcol) {
    if (p_linear < 0.0 || p_linear > 1.0 || p_dcol < 0.0 || p_dcol > 1.0)
        throw ConfigError("combined_p: inputs must be probabilities");
    return std::min(1.0, 2.0 * std::min(p_linear, p_dcol));
}

AssociationScore score_predictor(std::span<const double> x,
                                 std::span<const double> y,
                                 std::span<const std::uint32_t> x_order,
                                 std::span<const double> sorted_null) {
    AssociationScore score;
    score.s_delta = s_delta_ordered(y, x_order);
    score.sigma2_y = stats::sample_variance(y);
    score.explained_fraction =
        score.sigma2_y > 0.0
            ? (score.sigma2_y - score.s_delta) / score.sigma2_y
            : 0.0;
    score.p_dcol = permutation_p_from_null(score.s_delta, sorted_null);
    try {
        score.p_linear = pearson_p(x, y);
    } catch (const DegenerateInputError&) {
        // constant predictor column: no linear evidence
        score.p_linear = 1.0;
    }
    score.p_combined = combined_p(score.p_linear, score.p_dcol);
    return score;
}

}  // namespace nvsd
