#include "nvsd/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nvsd/common.hpp"
#include "nvsd/parallel.hpp"
#include "nvsd/predict.hpp"
#include "nvsd/stats.hpp"

namespace nvsd::sim {

double LinkFunction::operator()(double x) const {
    switch (family) {
        case LinkFamily::linear:
            return x;
        case LinkFamily::absolute:
            return std::fabs(x);
        case LinkFamily::sine:
            return std::sin(2.0 * M_PI * (x - phase) / period);
        case LinkFamily::sawtooth: {
            // ramp from -1 to 1 over each period
            const double t = (x - phase) / period;
            return 2.0 * (t - std::floor(t + 0.5));
        }
        case LinkFamily::box: {
            const double s = std::sin(2.0 * M_PI * (x - phase) / period);
            return s >= 0.0 ? 1.0 : -1.0;
        }
    }
    return x;
}

std::string to_string(LinkFamily f) {
    switch (f) {
        case LinkFamily::linear: return "linear";
        case LinkFamily::absolute: return "absolute";
        case LinkFamily::sine: return "sine";
        case LinkFamily::sawtooth: return "sawtooth";
        case LinkFamily::box: return "box";
    }
    return "linear";
}

LinkFamily link_family_from_string(const std::string& s) {
    if (s == "linear") return LinkFamily::linear;
    if (s == "absolute") return LinkFamily::absolute;
    if (s == "sine") return LinkFamily::sine;
    if (s == "sawtooth") return LinkFamily::sawtooth;
    if (s == "box") return LinkFamily::box;
    throw ConfigError("unknown link family '" + s + "'");
}

void SimulationSpec::validate() const {
    if (q < 1 || q > p) throw ConfigError("simulation: need 1 <= q <= p");
    if (n < 3) throw ConfigError("simulation: need n >= 3");
    if (sigma < 0.0) throw ConfigError("simulation: sigma must be >= 0");
    if (correlation == CorrelationSource::ar1 &&
        (rho <= -1.0 || rho >= 1.0))
        throw ConfigError("simulation: AR(1) rho must be in (-1,1)");
    if (correlation == CorrelationSource::file) {
        if (correlation_matrix.size() != p)
            throw ConfigError("simulation: correlation matrix must be p x p");
        for (const auto& row : correlation_matrix)
            if (row.size() != p)
                throw ConfigError("simulation: correlation matrix must be p x p");
    }
    if (!(link_period > 0.0)) throw ConfigError("simulation: period must be > 0");
}

std::vector<DrawnLink> draw_links(std::size_t q, double period, Rng& rng) {
    if (q < 1) throw ConfigError("draw_links: q must be >= 1");
    std::vector<DrawnLink> links(q);
    for (auto& l : links) {
        const double u = rng.uniform();
        if (u < 0.5) l.link.family = LinkFamily::linear;
        else if (u < 0.625) l.link.family = LinkFamily::absolute;
        else if (u < 0.75) l.link.family = LinkFamily::sine;
        else if (u < 0.875) l.link.family = LinkFamily::sawtooth;
        else l.link.family = LinkFamily::box;
        l.link.period = period;
        l.beta = rng.uniform(1.0, 3.0);
        if (rng.uniform() < 0.5) l.beta = -l.beta;
    }
    return links;
}

namespace {

// Lower Cholesky factor; throws on a non-PD matrix.
std::vector<std::vector<double>> cholesky(
    const std::vector<std::vector<double>>& a) {
    const std::size_t n = a.size();
    std::vector<std::vector<double>> l(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a[i][j];
            for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
            if (i == j) {
                if (s <= 0.0)
                    throw ConfigError(
                        "correlation matrix is not positive definite");
                l[i][j] = std::sqrt(s);
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    return l;
}

}  // namespace

std::vector<std::vector<double>> gen_predictors(const SimulationSpec& spec,
                                                Rng& rng) {
    spec.validate();
    const std::size_t n = spec.n, p = spec.p;
    std::vector<std::vector<double>> cols(p, std::vector<double>(n));

    if (spec.correlation == CorrelationSource::identity) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < p; ++j) cols[j][i] = rng.normal();
    } else if (spec.correlation == CorrelationSource::ar1) {
        // AR(1) rows: x_0 = z_0, x_j = rho x_{j-1} + sqrt(1-rho^2) z_j
        const double scale = std::sqrt(1.0 - spec.rho * spec.rho);
        for (std::size_t i = 0; i < n; ++i) {
            double prev = rng.normal();
            cols[0][i] = prev;
            for (std::size_t j = 1; j < p; ++j) {
                prev = spec.rho * prev + scale * rng.normal();
                cols[j][i] = prev;
            }
        }
    } else {
        const auto l = cholesky(spec.correlation_matrix);
        std::vector<double> z(p);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < p; ++j) z[j] = rng.normal();
            for (std::size_t j = 0; j < p; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k <= j; ++k) s += l[j][k] * z[k];
                cols[j][i] = s;
            }
        }
    }

    if (spec.marginal == Marginal::uniform) {
        // probability integral transform: standard normal -> uniform(0,1)
        for (auto& col : cols)
            for (double& v : col) v = stats::norm_cdf(v);
    }
    return cols;
}

std::vector<double> gen_outcome(
    const std::vector<std::vector<double>>& columns,
    const std::vector<std::size_t>& true_cols,
    const std::vector<DrawnLink>& links, double sigma, Rng& rng) {
    if (true_cols.size() != links.size())
        throw ConfigError("gen_outcome: one link per true predictor");
    if (columns.empty()) throw ConfigError("gen_outcome: empty matrix");
    const std::size_t n = columns.front().size();
    std::vector<double> y(n, 0.0);
    for (std::size_t t = 0; t < true_cols.size(); ++t) {
        const auto& col = columns.at(true_cols[t]);
        for (std::size_t i = 0; i < n; ++i)
            y[i] += links[t].beta * links[t].link(col[i]);
    }
    if (sigma > 0.0)
        for (std::size_t i = 0; i < n; ++i) y[i] += rng.normal(0.0, sigma);
    return y;
}

SimulatedData generate(const SimulationSpec& spec, std::uint64_t replicate) {
    spec.validate();
    // separate substreams so changing n does not reshuffle the links
    const std::uint64_t base = mix64(spec.seed + 0x51EDULL * (replicate + 1));
    Rng rng_x(base, 1);
    Rng rng_links(base, 2);
    Rng rng_noise(base, 3);

    SimulatedData out;
    const auto cols = gen_predictors(spec, rng_x);
    out.true_cols = rng_links.sample_without_replacement(spec.p, spec.q);
    std::sort(out.true_cols.begin(), out.true_cols.end());
    out.links = draw_links(spec.q, spec.link_period, rng_links);
    out.data.columns = cols;
    out.data.response =
        gen_outcome(cols, out.true_cols, out.links, spec.sigma, rng_noise);
    out.data.names.resize(spec.p);
    for (std::size_t j = 0; j < spec.p; ++j)
        out.data.names[j] = "x" + std::to_string(j + 1);
    return out;
}

BenchmarkSummary run_benchmark(const SimulationSpec& spec,
                               const SelectionConfig& cfg,
                               std::size_t replicates) {
    spec.validate();
    cfg.validate();
    if (replicates < 1) throw ConfigError("run_benchmark: need >= 1 replicate");

    BenchmarkSummary summary;
    summary.rows.resize(replicates);

    for (std::size_t r = 0; r < replicates; ++r) {
        const SimulatedData sim_data = generate(spec, r);
        const std::size_t n = sim_data.data.n_rows();

        // 1:1 train/test split
        Rng split_rng(mix64(spec.seed + 0x5B17ULL), r);
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        split_rng.shuffle(perm);
        const std::size_t n_train = n / 2;
        std::vector<std::size_t> train_rows(perm.begin(), perm.begin() + n_train);
        std::vector<std::size_t> test_rows(perm.begin() + n_train, perm.end());
        const Dataset train = sim_data.data.restrict_rows(train_rows);
        const Dataset test = sim_data.data.restrict_rows(test_rows);

        SelectionConfig rep_cfg = cfg;
        rep_cfg.seed = mix64(cfg.seed + 0xBE9CULL * (r + 1));

        BenchmarkRow row;
        row.replicate = r;

        const SelectionTrace trace = select_variables(train, rep_cfg);
        row.n_selected = trace.selected_set.size();
        for (std::size_t v : trace.selected_set) {
            if (std::binary_search(sim_data.true_cols.begin(),
                                   sim_data.true_cols.end(), v))
                ++row.true_found;
            else
                ++row.false_selected;
        }

        const double train_mean = stats::mean(train.response);
        AdditiveModel model = AdditiveModel::mean_only(train_mean);
        if (!trace.selected_set.empty()) {
            const std::size_t k =
                choose_k_by_cv(train, trace.selected_set, 5, rep_cfg.seed);
            row.k_cv = k;
            const std::vector<std::size_t> cols(trace.selected_set.begin(),
                                                trace.selected_set.begin() + k);
            model = fit_additive(train.restrict_to(cols));
        }
        row.nrmse_model = nvsd::nrmse(test.response, model.predict(test));
        const std::vector<double> mean_pred(test.n_rows(), train_mean);
        row.nrmse_mean = nvsd::nrmse(test.response, mean_pred);
        summary.rows[r] = row;
    }

    double sum = 0.0, sum_mean_only = 0.0;
    for (const auto& row : summary.rows) {
        sum += row.nrmse_model;
        sum_mean_only += row.nrmse_mean;
    }
    summary.mean_nrmse = sum / static_cast<double>(replicates);
    summary.mean_nrmse_mean_only =
        sum_mean_only / static_cast<double>(replicates);
    double ss = 0.0;
    for (const auto& row : summary.rows) {
        const double d = row.nrmse_model - summary.mean_nrmse;
        ss += d * d;
    }
    summary.sd_nrmse = replicates > 1
                           ? std::sqrt(ss / static_cast<double>(replicates - 1))
                           : 0.0;
    return summary;
}

}  // namespace nvsd::sim
