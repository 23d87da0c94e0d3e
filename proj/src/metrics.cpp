#include "nvsd/metrics.hpp"

#include <cmath>

#include "nvsd/common.hpp"
#include "nvsd/stats.hpp"

namespace nvsd {

double nrmse(std::span<const double> y_true, std::span<const double> y_pred) {
    if (y_true.size() != y_pred.size() || y_true.size() < 2)
        throw InvalidSampleError("nrmse: mismatched or too-short vectors");
    const double spread = stats::iqr(y_true);
    if (spread <= 0.0)
        throw DegenerateResponseError("nrmse: zero IQR in true responses");
    double mse = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const double d = y_pred[i] - y_true[i];
        mse += d * d;
    }
    mse /= static_cast<double>(y_true.size());
    return std::sqrt(mse) / spread;
}

}  // namespace nvsd
