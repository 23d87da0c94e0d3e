#include "nvsd/select.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nvsd/common.hpp"
#include "nvsd/metrics.hpp"
#include "nvsd/parallel.hpp"
#include "nvsd/predict.hpp"
#include "nvsd/rng.hpp"
#include "nvsd/stats.hpp"

namespace nvsd {

void SelectionConfig::validate() const {
    if (!(alpha_stop > 0.0) || !(alpha_stop < 1.0))
        throw ConfigError("selection: alpha_stop must be in (0,1)");
    if (m_perms < 1) throw ConfigError("selection: m_perms must be >= 1");
    roughening.validate();
}

namespace {

// per-iteration permutation seeds, decoupled from the replicate substreams
std::uint64_t null_seed(std::uint64_t seed, std::size_t iteration) {
    return mix64(seed + 0x9E3779B97F4A7C15ULL * (iteration + 1));
}

std::vector<AssociationScore> rank_pass(
    const Dataset& d, std::span<const std::vector<std::uint32_t>> orders,
    std::span<const double> y, std::size_t m, std::uint64_t seed,
    int threads) {
    if (stats::sample_variance(y) <= 0.0)
        throw DegenerateResponseError("rank_variables: constant response");
    const auto null_stats = permutation_null_threaded(y, m, seed, threads);
    const std::size_t p = d.n_cols();
    std::vector<AssociationScore> scores(p);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
    for (long long j = 0; j < static_cast<long long>(p); ++j) {
        const auto jj = static_cast<std::size_t>(j);
        scores[jj] = score_predictor(d.columns[jj], y, orders[jj], null_stats);
    }
    return scores;
}

}  // namespace

std::vector<AssociationScore> rank_variables(const Dataset& d,
                                             const SelectionConfig& cfg) {
    d.validate();
    cfg.validate();
    std::vector<std::vector<std::uint32_t>> orders(d.n_cols());
    for (std::size_t j = 0; j < d.n_cols(); ++j)
        orders[j] = sort_order(d.columns[j]);
    return rank_pass(d, orders, d.response, cfg.m_perms, cfg.seed,
                     max_threads());
}

namespace reference {
std::vector<AssociationScore> rank_variables_serial(const Dataset& d,
                                                    const SelectionConfig& cfg) {
    d.validate();
    cfg.validate();
    std::vector<std::vector<std::uint32_t>> orders(d.n_cols());
    for (std::size_t j = 0; j < d.n_cols(); ++j)
        orders[j] = sort_order(d.columns[j]);
    return rank_pass(d, orders, d.response, cfg.m_perms, cfg.seed, 1);
}
}  // namespace reference

SelectionTrace select_variables(const Dataset& d, const SelectionConfig& cfg) {
    d.validate();
    cfg.validate();
    const std::size_t p = d.n_cols();
    if (p == 0) throw SchemaError("select_variables: dataset has no predictors");

    std::vector<std::vector<std::uint32_t>> orders(p);
    for (std::size_t j = 0; j < p; ++j) orders[j] = sort_order(d.columns[j]);

    std::vector<double> y = d.response;
    SelectionTrace trace;
    const std::size_t max_iters = cfg.effective_max_iters(p);
    const int threads = max_threads();

    RougheningConfig rough = cfg.roughening;
    rough.theta = cfg.theta;

    trace.stop_reason = StopReason::max_iters;
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        // the response changes every iteration, so the null must be rebuilt
        const auto scores = rank_pass(d, orders, y, cfg.m_perms,
                                      null_seed(cfg.seed, iter), threads);
        std::size_t best = 0;
        for (std::size_t j = 1; j < p; ++j)
            if (scores[j].p_combined < scores[best].p_combined) best = j;

        if (scores[best].p_combined > cfg.alpha_stop) {
            trace.stop_reason = StopReason::threshold;
            break;
        }
        trace.iterations.push_back({iter, best, scores[best].p_combined,
                                    scores[best].p_linear,
                                    scores[best].p_dcol});
        y = roughen_step(d.columns[best], orders[best], y, rough);
        if (stats::sample_variance(y) <= 0.0) {
            // roughening flattened the response; nothing left to test
            trace.stop_reason = StopReason::threshold;
            break;
        }
    }

    std::vector<bool> seen(p, false);
    for (const auto& rec : trace.iterations) {
        if (!seen[rec.chosen_variable]) {
            seen[rec.chosen_variable] = true;
            trace.selected_set.push_back(rec.chosen_variable);
        }
    }
    return trace;
}

std::size_t choose_k_by_cv(const Dataset& d,
                           const std::vector<std::size_t>& ranked,
                           std::size_t folds, std::uint64_t seed) {
    d.validate();
    if (ranked.empty())
        throw ConfigError("choose_k_by_cv: empty ranked variable list");
    if (folds < 2) throw ConfigError("choose_k_by_cv: need at least 2 folds");
    const std::size_t n = d.n_rows();
    if (n < 2 * folds)
        throw ConfigError("choose_k_by_cv: need at least 2 rows per fold");

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(seed, 0x5F0Cull);
    rng.shuffle(perm);

    std::vector<std::vector<std::size_t>> fold_rows(folds);
    for (std::size_t i = 0; i < n; ++i) fold_rows[i % folds].push_back(perm[i]);

    double best_err = std::numeric_limits<double>::infinity();
    std::size_t best_k = 1;
    for (std::size_t k = 1; k <= ranked.size(); ++k) {
        const std::vector<std::size_t> cols(ranked.begin(),
                                            ranked.begin() + k);
        double err_sum = 0.0;
        for (std::size_t f = 0; f < folds; ++f) {
            std::vector<std::size_t> train_rows;
            train_rows.reserve(n - fold_rows[f].size());
            for (std::size_t g = 0; g < folds; ++g)
                if (g != f)
                    train_rows.insert(train_rows.end(), fold_rows[g].begin(),
                                      fold_rows[g].end());
            const Dataset train = d.restrict_to(cols).restrict_rows(train_rows);
            const Dataset test = d.restrict_to(cols).restrict_rows(fold_rows[f]);
            const AdditiveModel model = fit_additive(train);
            err_sum += nrmse(test.response, model.predict(test));
        }
        const double err = err_sum / static_cast<double>(folds);
        if (err < best_err) {
            best_err = err;
            best_k = k;
        }
    }
    return best_k;
}

std::vector<std::vector<std::size_t>> iterative_group_selection(
    const Dataset& d, const SelectionConfig& cfg, std::size_t min_group) {
    d.validate();
    cfg.validate();
    std::vector<std::size_t> live(d.n_cols());
    std::iota(live.begin(), live.end(), std::size_t{0});

    std::vector<std::vector<std::size_t>> groups;
    while (!live.empty()) {
        const Dataset working = d.restrict_to(live);
        const SelectionTrace trace = select_variables(working, cfg);
        std::vector<std::size_t> group;
        group.reserve(trace.selected_set.size());
        for (std::size_t idx : trace.selected_set) group.push_back(live[idx]);
        groups.push_back(group);
        if (group.size() < min_group) break;
        std::vector<std::size_t> next;
        next.reserve(live.size() - group.size());
        std::vector<bool> drop(d.n_cols(), false);
        for (std::size_t g : group) drop[g] = true;
        for (std::size_t idx : live)
            if (!drop[idx]) next.push_back(idx);
        live = std::move(next);
    }
    return groups;
}

}  // namespace nvsd
