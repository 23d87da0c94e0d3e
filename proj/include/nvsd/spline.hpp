#pragma once

#include <span>
#include <vector>

namespace nvsd {

// How the smoothing penalty is chosen.
enum class PenaltyRule {
    gcv,          // generalized cross-validation over a log-spaced grid
    fixed_lambda  // caller supplies lambda directly
};

struct SmootherSpec {
    PenaltyRule penalty = PenaltyRule::gcv;
    double lambda = 1.0;  // used when penalty == fixed_lambda
};

// A fitted cubic smoothing spline in natural-spline form: values and second
// derivatives at the unique knots. Evaluation outside the training range
// clamps to the boundary value.
struct SplineFit {
    std::vector<double> knots;    // strictly increasing unique x
    std::vector<double> values;   // fitted g at each knot
    std::vector<double> second_derivs;  // natural: zero at both ends
    double lambda = 0.0;
    double gcv = 0.0;
    double edf = 0.0;  // trace of the smoother matrix

    double operator()(double x) const;

    // Fitted value at every point of a (sorted, possibly tied) x vector.
    std::vector<double> evaluate(std::span<const double> x) const;
};

// Weighted cubic smoothing spline on strictly increasing knots
// (Reinsch/Green-Silverman banded formulation):
//   minimize sum w_i (z_i - g_i)^2 + lambda * int g''(t)^2 dt.
// extra_ss is added to the residual sum in the GCV score (the within-tie
// scatter when the caller collapsed duplicates); extra_n likewise.
SplineFit fit_spline_weighted(std::span<const double> knots,
                              std::span<const double> z,
                              std::span<const double> weights,
                              const SmootherSpec& spec,
                              double extra_ss = 0.0, double extra_n = 0.0);

// Smoothing spline on raw data sorted by x. Tied x values are collapsed to
// their weighted mean before fitting. Fewer than two distinct x values
// degenerate to the mean. Throws FitError when n < 4.
SplineFit fit_smoothing_spline(std::span<const double> x_sorted,
                               std::span<const double> y,
                               const SmootherSpec& spec = {});

}  // namespace nvsd
