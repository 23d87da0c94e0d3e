#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nvsd/spline.hpp"

namespace nvsd {

enum class RougheningMode {
    dcol_gradient,  // ascend the S_delta gradient
    smoother        // inflate residuals around a fitted smoother
};

struct RougheningConfig {
    double theta = 0.01;  // step size; absorbs the 1/(n-2) gradient factor
    RougheningMode mode = RougheningMode::dcol_gradient;
    SmootherSpec smoother_spec;

    // Throws ConfigError unless 0 < theta <= 1.
    void validate() const;
};

// Gradient of S_delta with respect to a response already ordered by the
// predictor, including the 1/(n-2) factor:
//   ( y_1 - y_2, 2y_2 - y_1 - y_3, ..., y_n - y_{n-1} ) / (n-2).
// Components telescope to zero. Throws InvalidSampleError when n < 3.
std::vector<double> grad_s_delta(std::span<const double> y_sorted);

// One gradient-ascent roughening step on an ordered response:
//   y_1(1+theta) - y_2 theta,
//   y_i(1+2theta) - (y_{i-1}+y_{i+1}) theta,
//   y_n(1+theta) - y_{n-1} theta.
// Identical to y + theta (n-2) grad_s_delta(y); the mean is preserved.
std::vector<double> roughen_dcol(std::span<const double> y_sorted,
                                 const RougheningConfig& cfg);

// Smoothed response at every x of a sample sorted by x. Tied x values share
// one fitted value. Throws FitError when n < 4.
std::vector<double> fit_smoother(std::span<const double> x_sorted,
                                 std::span<const double> y,
                                 const SmootherSpec& spec);

// Residual inflation around a given smooth: y_i + theta (y_i - ytilde_i).
std::vector<double> inflate_residuals(std::span<const double> y,
                                      std::span<const double> fitted,
                                      double theta);

// Smoother-based roughening of a sample sorted by x.
std::vector<double> roughen_smoother(std::span<const double> x_sorted,
                                     std::span<const double> y,
                                     const RougheningConfig& cfg);

// One roughening step against predictor x, in the sample's original order:
// gathers y through the precomputed x order, applies the configured update,
// and scatters the result back.
std::vector<double> roughen_step(std::span<const double> x,
                                 std::span<const std::uint32_t> x_order,
                                 std::span<const double> y,
                                 const RougheningConfig& cfg);

}  // namespace nvsd
