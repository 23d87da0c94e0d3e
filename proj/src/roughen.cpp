#include "nvsd/roughen.hpp"

#include <cmath>

#include "nvsd/common.hpp"

namespace nvsd {

void RougheningConfig::validate() const {
    if (!(theta > 0.0) || theta > 1.0)
        throw ConfigError("roughening: theta must be in (0, 1]");
}

std::vector<double> grad_s_delta(std::span<const double> y_sorted) {
    const std::size_t n = y_sorted.size();
    if (n < 3) throw InvalidSampleError("grad_s_delta: need at least 3 points");
    const double scale = 1.0 / static_cast<double>(n - 2);
    std::vector<double> g(n);
    g[0] = (y_sorted[0] - y_sorted[1]) * scale;
    for (std::size_t i = 1; i + 1 < n; ++i)
        g[i] = (2.0 * y_sorted[i] - y_sorted[i - 1] - y_sorted[i + 1]) * scale;
    g[n - 1] = (y_sorted[n - 1] - y_sorted[n - 2]) * scale;
    return g;
}

std::vector<double> roughen_dcol(std::span<const double> y_sorted,
                                 const RougheningConfig& cfg) {
    const std::size_t n = y_sorted.size();
    if (n < 3) throw InvalidSampleError("roughen_dcol: need at least 3 points");
    const double th = cfg.theta;
    std::vector<double> out(n);
    out[0] = y_sorted[0] * (1.0 + th) - y_sorted[1] * th;
    for (std::size_t i = 1; i + 1 < n; ++i)
        out[i] = y_sorted[i] * (1.0 + 2.0 * th) -
                 (y_sorted[i - 1] + y_sorted[i + 1]) * th;
    out[n - 1] = y_sorted[n - 1] * (1.0 + th) - y_sorted[n - 2] * th;
    return out;
}

std::vector<double> fit_smoother(std::span<const double> x_sorted,
                                 std::span<const double> y,
                                 const SmootherSpec& spec) {
    const SplineFit fit = fit_smoothing_spline(x_sorted, y, spec);
    return fit.evaluate(x_sorted);
}

std::vector<double> inflate_residuals(std::span<const double> y,
                                      std::span<const double> fitted,
                                      double theta) {
    if (y.size() != fitted.size())
        throw InvalidSampleError("inflate_residuals: length mismatch");
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        out[i] = y[i] + theta * (y[i] - fitted[i]);
    return out;
}

std::vector<double> roughen_smoother(std::span<const double> x_sorted,
                                     std::span<const double> y,
                                     const RougheningConfig& cfg) {
    const auto fitted = fit_smoother(x_sorted, y, cfg.smoother_spec);
    return inflate_residuals(y, fitted, cfg.theta);
}

std::vector<double> roughen_step(std::span<const double> x,
                                 std::span<const std::uint32_t> x_order,
                                 std::span<const double> y,
                                 const RougheningConfig& cfg) {
    cfg.validate();
    const std::size_t n = y.size();
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = x[x_order[i]];
        ys[i] = y[x_order[i]];
    }
    std::vector<double> updated;
    if (cfg.mode == RougheningMode::dcol_gradient) {
        updated = roughen_dcol(ys, cfg);
    } else {
        updated = roughen_smoother(xs, ys, cfg);
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[x_order[i]] = updated[i];
    return out;
}

}  // namespace nvsd
