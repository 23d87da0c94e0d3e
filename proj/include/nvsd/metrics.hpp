#pragma once

#include <span>

namespace nvsd {

// Root mean squared prediction error normalized by the interquartile range of
// the true responses: sqrt(mean((yhat - y)^2)) / IQR(y). Quantiles use linear
// interpolation (type 7) so the value is bit-reproducible.
// Throws InvalidSampleError on length mismatch / n < 2 and
// DegenerateResponseError when IQR(y) == 0.
double nrmse(std::span<const double> y_true, std::span<const double> y_pred);

}  // namespace nvsd
