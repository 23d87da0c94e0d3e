#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nvsd/dataset.hpp"
#include "nvsd/metrics.hpp"
#include "nvsd/rng.hpp"
#include "nvsd/select.hpp"

namespace nvsd::sim {

enum class LinkFamily { linear, absolute, sine, sawtooth, box };

// One true-predictor link. Periodic families share the period parameter
// (the wave repeats every `period` units, phase-shifted by `phase`):
//   sine:     sin(2 pi (x - phase) / period)
//   sawtooth: ramps from -1 to 1 over each period, discontinuous at the wrap
//   box:      sign of the sine wave
// linear and absolute ignore the parameters. The default period of 2 gives
// three full oscillations across the bulk of a standard normal predictor.
struct LinkFunction {
    LinkFamily family = LinkFamily::linear;
    double period = 2.0;
    double phase = 0.0;

    double operator()(double x) const;
};

std::string to_string(LinkFamily f);
LinkFamily link_family_from_string(const std::string& s);

enum class CorrelationSource { identity, ar1, file };
enum class Marginal { normal, uniform };

struct SimulationSpec {
    std::size_t q = 3;   // true predictors
    std::size_t p = 100; // total predictors
    std::size_t n = 400; // sample size
    double sigma = 1.0;  // noise sd
    CorrelationSource correlation = CorrelationSource::identity;
    double rho = 0.0;                       // AR(1) parameter
    std::vector<std::vector<double>> correlation_matrix;  // when source == file
    Marginal marginal = Marginal::normal;
    double link_period = 2.0;
    std::uint64_t seed = 0;

    void validate() const;
};

// Draws q (link, beta) pairs: family with probabilities
// (0.5, 0.125, 0.125, 0.125, 0.125) for (linear, absolute, sine, sawtooth,
// box), beta ~ unif[1,3], sign flipped with probability 1/2.
struct DrawnLink {
    LinkFunction link;
    double beta = 1.0;
};
std::vector<DrawnLink> draw_links(std::size_t q, double period, Rng& rng);

// n x p predictor matrix: rows i.i.d. multivariate normal with the requested
// correlation (identity / AR(1) rho / user matrix); uniform marginals apply
// the probability integral transform per cell. Columns of the result are the
// predictors. Throws on a non-positive-definite correlation matrix.
std::vector<std::vector<double>> gen_predictors(const SimulationSpec& spec,
                                                Rng& rng);

// y_j = sum_i beta_i f_i(x_{ij}) + eps_j with eps ~ N(0, sigma^2).
std::vector<double> gen_outcome(
    const std::vector<std::vector<double>>& columns,
    const std::vector<std::size_t>& true_cols,
    const std::vector<DrawnLink>& links, double sigma, Rng& rng);

// A fully generated dataset plus the ground truth that produced it.
struct SimulatedData {
    Dataset data;
    std::vector<std::size_t> true_cols;
    std::vector<DrawnLink> links;
};
SimulatedData generate(const SimulationSpec& spec, std::uint64_t replicate = 0);

// One benchmark replicate: generate, split 1:1, select on the training half,
// choose the model size by 5-fold CV, fit the additive predictor, score the
// test half.
struct BenchmarkRow {
    std::size_t replicate = 0;
    std::size_t n_selected = 0;
    std::size_t true_found = 0;
    std::size_t false_selected = 0;
    std::size_t k_cv = 0;
    double nrmse_model = 0.0;
    double nrmse_mean = 0.0;  // mean-only predictor on the same split
};

struct BenchmarkSummary {
    std::vector<BenchmarkRow> rows;
    double mean_nrmse = 0.0;
    double sd_nrmse = 0.0;
    double mean_nrmse_mean_only = 0.0;
};

BenchmarkSummary run_benchmark(const SimulationSpec& spec,
                               const SelectionConfig& cfg,
                               std::size_t replicates);

}  // namespace nvsd::sim
