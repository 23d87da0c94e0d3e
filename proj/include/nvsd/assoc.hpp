#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace nvsd {

// One predictor/response pair. Values must be finite and |x| == |y| >= 3.
struct PairedSample {
    std::vector<double> x;
    std::vector<double> y;

    std::size_t size() const { return x.size(); }

    // Throws InvalidSampleError on length mismatch, n < 3, or non-finite values.
    void validate() const;
};

// Everything the selection loop needs to know about one candidate predictor.
struct AssociationScore {
    double s_delta = 0.0;            // consecutive-difference variance estimate
    double sigma2_y = 0.0;           // sample variance of the response
    double explained_fraction = 0.0; // (sigma2_y - s_delta) / sigma2_y, unclamped
    double p_dcol = 1.0;
    double p_linear = 1.0;
    double p_combined = 1.0;
};

// Permutation-test plan. The null distribution of S_delta depends only on the
// response values, so one set of m permuted statistics serves every predictor
// scored against the same y. The cache stores the exact response it was built
// from and is rebuilt whenever a different y shows up.
struct PermutationPlan {
    std::size_t m = 2000;
    std::uint64_t seed = 0;
    std::optional<std::vector<double>> cached_null;  // sorted ascending
    std::vector<double> cached_for_y;                // exact bytes the cache keys on

    PermutationPlan() = default;
    PermutationPlan(std::size_t m_, std::uint64_t seed_) : m(m_), seed(seed_) {}

    // Builds (or reuses) the sorted null for this response.
    std::span<const double> ensure_null(std::span<const double> y);

    void invalidate() {
        cached_null.reset();
        cached_for_y.clear();
    }
};

// Returns the index order that sorts x ascending, ties broken by original
// index (stable). This order is what "sorted by x" means everywhere below.
std::vector<std::uint32_t> sort_order(std::span<const double> x);

// Sorts the pairs by x (stable in x ties); pairing is preserved.
PairedSample sort_pairs(const PairedSample& s);

// S_delta of a response already ordered by the predictor:
//   sum of squared consecutive differences / (2(n-2)).
// Throws InvalidSampleError when n < 3.
double s_delta(std::span<const double> y_sorted);

// S_delta of y gathered through a sort order (avoids materialising the
// reordered vector in hot loops).
double s_delta_ordered(std::span<const double> y, std::span<const std::uint32_t> order);

// Fraction of response variance attributable to the predictor:
// (var(y) - S_delta) / var(y). Not clamped; small-sample noise can push it
// slightly negative. Throws DegenerateResponseError when var(y) == 0.
double explained_fraction(std::span<const double> y_sorted);

// Permutation p-value with add-one smoothing:
//   p = (1 + #{ S^(j) <= S_obs }) / (m + 1).
// Deterministic given plan.seed; reuses plan.cached_null when it matches y.
double permutation_p(const PairedSample& s, PermutationPlan& plan);

// As above but with a precomputed sorted null and observed statistic.
double permutation_p_from_null(double observed, std::span<const double> sorted_null);

// Two-sided Pearson test: t = r sqrt((n-2)/(1-r^2)) against t(n-2).
// Throws DegenerateInputError when either vector is constant.
double pearson_p(const PairedSample& s);
double pearson_p(std::span<const double> x, std::span<const double> y);

// Bonferroni-style union of the linear and DCOL tests: min(1, 2 min(pa, pb)).
double combined_p(double p_linear, double p_dcol);

// Convenience: full score of one predictor against a response whose
// permutation null is already built.
AssociationScore score_predictor(std::span<const double> x,
                                 std::span<const double> y,
                                 std::span<const std::uint32_t> x_order,
                                 std::span<const double> sorted_null);

// m permuted S_delta values of y, sorted ascending. Replicate j draws from
// substream (seed, j), so the result is identical for any thread count.
std::vector<double> permutation_null(std::span<const double> y, std::size_t m,
                                     std::uint64_t seed);

// Same, with an explicit thread count (1 = serial).
std::vector<double> permutation_null_threaded(std::span<const double> y,
                                              std::size_t m,
                                              std::uint64_t seed, int threads);

namespace reference {
// Single-threaded twin of permutation_null, kept as the oracle the parallel
// kernel is checked against.
std::vector<double> permutation_null_serial(std::span<const double> y,
                                            std::size_t m, std::uint64_t seed);
}  // namespace reference

}  // namespace nvsd
