#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nvsd/dataset.hpp"
#include "nvsd/spline.hpp"

namespace nvsd {

// Sparse additive model: yhat = intercept + sum_j f_j(x_j), each f_j a cubic
// smoothing spline fit by cyclic backfitting. Component fits are centered
// (mean zero over training data) for identifiability; evaluation outside a
// component's training range clamps to the boundary value.
struct AdditiveModel {
    double intercept = 0.0;
    std::vector<std::string> variables;  // column names, in model order
    std::vector<SplineFit> components;   // one per variable

    // Mean-only model (no components); the fallback when nothing is selected.
    static AdditiveModel mean_only(double mean);

    // Predictions for rows drawn from d; columns are matched by name.
    // Throws SchemaError when a model variable is missing from d.
    std::vector<double> predict(const Dataset& d) const;

    // Versioned plain-text serialization, full precision.
    void save(std::ostream& os) const;
    static AdditiveModel load(std::istream& is);
};

struct BackfitOptions {
    std::size_t max_sweeps = 100;
    double tol = 1e-6;  // max absolute fitted-value change between sweeps
    SmootherSpec smoother_spec;
};

// Fits the additive model on every column of d by cyclic backfitting.
// Smoothing penalties are chosen by GCV on each variable's first sweep, then
// frozen so the cycle converges. Throws FitError when d has no columns or
// fewer than 10 rows.
AdditiveModel fit_additive(const Dataset& d, const BackfitOptions& opts = {});

}  // namespace nvsd
