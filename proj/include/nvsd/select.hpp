#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nvsd/assoc.hpp"
#include "nvsd/dataset.hpp"
#include "nvsd/roughen.hpp"

namespace nvsd {

// Tunables of the forward stagewise loop.
struct SelectionConfig {
    double theta = 0.01;
    double alpha_stop = 0.001;  // loop stops when min combined p exceeds this
    std::size_t m_perms = 2000;
    std::size_t max_iters = 0;  // 0 = use the 10*p default
    RougheningConfig roughening;
    std::uint64_t seed = 0;

    void validate() const;  // ConfigError on out-of-range values
    std::size_t effective_max_iters(std::size_t p) const {
        return max_iters > 0 ? max_iters : 10 * p;
    }
};

enum class StopReason { threshold, max_iters };

struct IterationRecord {
    std::size_t iter_index;
    std::size_t chosen_variable;
    double p_combined;
    double p_linear;
    double p_dcol;
};

struct SelectionTrace {
    std::vector<IterationRecord> iterations;
    std::vector<std::size_t> selected_set;  // distinct, by first selection
    StopReason stop_reason = StopReason::threshold;
};

// Scores every predictor against the current response. The permutation null
// is built once from y and shared across all candidates; the per-candidate
// scan is data-parallel and its result is independent of the thread count.
std::vector<AssociationScore> rank_variables(const Dataset& d,
                                             const SelectionConfig& cfg);

namespace reference {
// Single-threaded twin of rank_variables; the parallel scan is tested
// bit-identical against it.
std::vector<AssociationScore> rank_variables_serial(const Dataset& d,
                                                    const SelectionConfig& cfg);
}  // namespace reference

// The full forward stagewise loop: rank, pick the argmin combined p (ties to
// the lowest column index), roughen the response on that predictor, repeat;
// stop when the minimum p exceeds alpha_stop or max_iters is hit. The
// caller's Dataset is never modified.
SelectionTrace select_variables(const Dataset& d, const SelectionConfig& cfg);

// Number of top-ranked variables minimizing k-fold CV error (NRMSE) of the
// bundled additive predictor, scanning k = 1..|ranked| from the front.
// Fold assignment is deterministic in the seed. Ties go to the smaller k.
std::size_t choose_k_by_cv(const Dataset& d,
                           const std::vector<std::size_t>& ranked,
                           std::size_t folds, std::uint64_t seed);

// Repeated selection with removal: run the selector, drop the selected
// columns, repeat until a group comes back with fewer than min_group members
// (that group is still included) or no columns remain. Groups hold original
// column indices and are disjoint.
std::vector<std::vector<std::size_t>> iterative_group_selection(
    const Dataset& d, const SelectionConfig& cfg, std::size_t min_group = 20);

}  // namespace nvsd
