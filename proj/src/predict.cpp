#include "nvsd/predict.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "nvsd/assoc.hpp"
#include "nvsd/common.hpp"
#include "nvsd/stats.hpp"

namespace nvsd {

AdditiveModel AdditiveModel::mean_only(double mean) {
    AdditiveModel m;
    m.intercept = mean;
    return m;
}

std::vector<double> AdditiveModel::predict(const Dataset& d) const {
    std::vector<std::size_t> cols;
    cols.reserve(variables.size());
    for (const auto& v : variables) cols.push_back(d.column_index(v));
    std::vector<double> out(d.n_rows(), intercept);
    for (std::size_t j = 0; j < variables.size(); ++j) {
        const auto& col = d.columns[cols[j]];
        const auto& f = components[j];
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += f(col[i]);
    }
    return out;
}

AdditiveModel fit_additive(const Dataset& d, const BackfitOptions& opts) {
    d.validate();
    if (d.n_cols() == 0)
        throw FitError("fit_additive: no variables to fit");
    if (d.n_rows() < 10)
        throw FitError("fit_additive: need at least 10 rows");

    const std::size_t n = d.n_rows();
    const std::size_t p = d.n_cols();

    AdditiveModel model;
    model.intercept = stats::mean(d.response);
    model.variables = d.names;
    model.components.resize(p);

    // per-variable sort orders and sorted x copies, reused every sweep
    std::vector<std::vector<std::uint32_t>> orders(p);
    std::vector<std::vector<double>> xs(p);
    for (std::size_t j = 0; j < p; ++j) {
        orders[j] = sort_order(d.columns[j]);
        xs[j].resize(n);
        for (std::size_t i = 0; i < n; ++i) xs[j][i] = d.columns[j][orders[j][i]];
    }

    std::vector<std::vector<double>> fitted(p, std::vector<double>(n, 0.0));
    std::vector<double> residual(n);
    for (std::size_t i = 0; i < n; ++i)
        residual[i] = d.response[i] - model.intercept;

    std::vector<SmootherSpec> specs(p, opts.smoother_spec);
    std::vector<double> partial_sorted(n);

    for (std::size_t sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        double max_change = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            // partial residual for variable j, in x_j order
            for (std::size_t i = 0; i < n; ++i) {
                const std::uint32_t r = orders[j][i];
                partial_sorted[i] = residual[r] + fitted[j][r];
            }
            SplineFit fit = fit_smoothing_spline(xs[j], partial_sorted, specs[j]);
            if (specs[j].penalty == PenaltyRule::gcv) {
                // freeze the GCV penalty after the first pass so the cycle
                // has a fixed point to converge to
                specs[j].penalty = PenaltyRule::fixed_lambda;
                specs[j].lambda = fit.lambda;
            }
            // center the component over the training rows (tied x values make
            // the knot mean the wrong weighting); the mean moves into the
            // intercept
            double fit_mean = 0.0;
            std::vector<double> new_fit(n);
            for (std::size_t i = 0; i < n; ++i) {
                new_fit[orders[j][i]] = fit(xs[j][i]);
                fit_mean += new_fit[orders[j][i]];
            }
            fit_mean /= static_cast<double>(n);
            for (double& v : fit.values) v -= fit_mean;
            model.intercept += fit_mean;
            for (std::size_t i = 0; i < n; ++i) {
                const double centered = new_fit[i] - fit_mean;
                const double change = std::fabs(centered - fitted[j][i]);
                if (change > max_change) max_change = change;
                // residual tracks y - intercept - sum of components, and both
                // the component and the intercept just moved
                residual[i] += fitted[j][i] - new_fit[i];
                fitted[j][i] = centered;
            }
            model.components[j] = std::move(fit);
        }
        if (max_change < opts.tol) break;
    }
    return model;
}

namespace {

void write_double(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
}

}  // namespace

void AdditiveModel::save(std::ostream& os) const {
    os << "nvsd-additive-model v1\n";
    os << "intercept ";
    write_double(os, intercept);
    os << "\ncomponents " << components.size() << "\n";
    for (std::size_t j = 0; j < components.size(); ++j) {
        const auto& f = components[j];
        os << "component " << variables[j] << "\n";
        os << "knots " << f.knots.size() << "\n";
        for (std::size_t i = 0; i < f.knots.size(); ++i) {
            write_double(os, f.knots[i]);
            os << ' ';
            write_double(os, f.values[i]);
            os << ' ';
            write_double(os, f.second_derivs[i]);
            os << '\n';
        }
    }
}

AdditiveModel AdditiveModel::load(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "nvsd-additive-model v1")
        throw SchemaError("model file: bad or missing header");
    AdditiveModel m;
    std::string word;
    is >> word;
    if (word != "intercept") throw SchemaError("model file: expected intercept");
    is >> m.intercept;
    is >> word;
    if (word != "components") throw SchemaError("model file: expected components");
    std::size_t k = 0;
    is >> k;
    for (std::size_t j = 0; j < k; ++j) {
        is >> word;
        if (word != "component") throw SchemaError("model file: expected component");
        std::string name;
        is >> name;
        is >> word;
        if (word != "knots") throw SchemaError("model file: expected knots");
        std::size_t nk = 0;
        is >> nk;
        SplineFit f;
        f.knots.resize(nk);
        f.values.resize(nk);
        f.second_derivs.resize(nk);
        for (std::size_t i = 0; i < nk; ++i)
            is >> f.knots[i] >> f.values[i] >> f.second_derivs[i];
        if (!is) throw SchemaError("model file: truncated component data");
        m.variables.push_back(name);
        m.components.push_back(std::move(f));
    }
    return m;
}

}  // namespace nvsd
