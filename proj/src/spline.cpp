#include "nvsd/spline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nvsd/common.hpp"

namespace nvsd {

double SplineFit::operator()(double x) const {
    const std::size_t k = knots.size();
    if (k == 0) throw FitError("evaluating an empty spline");
    if (k == 1) return values[0];
    // constant clamp outside the training range
    if (x <= knots.front()) return values.front();
    if (x >= knots.back()) return values.back();
    const auto it = std::upper_bound(knots.begin(), knots.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - knots.begin()) - 1;
    const double h = knots[i + 1] - knots[i];
    const double a = (knots[i + 1] - x) / h;
    const double b = (x - knots[i]) / h;
    return a * values[i] + b * values[i + 1] +
           ((a * a * a - a) * second_derivs[i] +
            (b * b * b - b) * second_derivs[i + 1]) *
               h * h / 6.0;
}

std::vector<double> SplineFit::evaluate(std::span<const double> x) const {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = (*this)(x[i]);
    return out;
}

namespace {

struct BandSystem {
    // pentadiagonal symmetric matrix B = R + lambda * C, plus the separate
    // bands of R and C so lambda can vary cheaply during the GCV search
    std::vector<double> r_diag, r_off;        // tridiagonal R
    std::vector<double> c_diag, c_off1, c_off2;  // pentadiagonal C = Qt W^-1 Q
    std::vector<double> qt_z;                 // right-hand side Qt z
};

struct Factor {
    std::vector<double> d, l1, l2;  // LDLt of B
};

// LDLt of the pentadiagonal B(lambda).
Factor factorize(const BandSystem& sys, double lambda) {
    const std::size_t n = sys.r_diag.size();
    Factor f;
    f.d.assign(n, 0.0);
    f.l1.assign(n, 0.0);
    f.l2.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double di = sys.r_diag[i] + lambda * sys.c_diag[i];
        if (i >= 1) di -= f.d[i - 1] * f.l1[i - 1] * f.l1[i - 1];
        if (i >= 2) di -= f.d[i - 2] * f.l2[i - 2] * f.l2[i - 2];
        f.d[i] = di;
        if (i + 1 < n) {
            double b1 = (i < sys.r_off.size() ? sys.r_off[i] : 0.0) +
                        lambda * (i < sys.c_off1.size() ? sys.c_off1[i] : 0.0);
            if (i >= 1) b1 -= f.d[i - 1] * f.l2[i - 1] * f.l1[i - 1];
            f.l1[i] = b1 / di;
        }
        if (i + 2 < n) {
            const double b2 =
                lambda * (i < sys.c_off2.size() ? sys.c_off2[i] : 0.0);
            f.l2[i] = b2 / di;
        }
    }
    return f;
}

std::vector<double> solve(const Factor& f, std::span<const double> rhs) {
    const std::size_t n = rhs.size();
    std::vector<double> v(rhs.begin(), rhs.end());
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= 1) v[i] -= f.l1[i - 1] * v[i - 1];
        if (i >= 2) v[i] -= f.l2[i - 2] * v[i - 2];
    }
    for (std::size_t i = 0; i < n; ++i) v[i] /= f.d[i];
    for (std::size_t i = n; i-- > 0;) {
        if (i + 1 < n) v[i] -= f.l1[i] * v[i + 1];
        if (i + 2 < n) v[i] -= f.l2[i] * v[i + 2];
    }
    return v;
}

// Central bands of B^-1 from the LDLt factor (Takahashi recurrences), enough
// to take tr(B^-1 C) for a pentadiagonal C.
double trace_binv_c(const Factor& f, const BandSystem& sys) {
    const std::size_t n = f.d.size();
    std::vector<double> s0(n, 0.0), s1(n, 0.0), s2(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        if (i + 2 < n)
            s2[i] = -f.l1[i] * s1[i + 1] - f.l2[i] * s0[i + 2];
        if (i + 1 < n)
            s1[i] = -f.l1[i] * s0[i + 1] -
                    (i + 2 < n ? f.l2[i] * s1[i + 1] : 0.0);
        s0[i] = 1.0 / f.d[i];
        if (i + 1 < n) s0[i] -= f.l1[i] * s1[i];
        if (i + 2 < n) s0[i] -= f.l2[i] * s2[i];
    }
    double tr = 0.0;
    for (std::size_t i = 0; i < n; ++i) tr += s0[i] * sys.c_diag[i];
    for (std::size_t i = 0; i + 1 < n; ++i) tr += 2.0 * s1[i] * sys.c_off1[i];
    for (std::size_t i = 0; i + 2 < n; ++i) tr += 2.0 * s2[i] * sys.c_off2[i];
    return tr;
}

struct EvalResult {
    std::vector<double> gamma;   // second derivatives at interior knots
    std::vector<double> fitted;  // g at all knots
    double rss = 0.0;
    double edf = 0.0;
    double gcv = 0.0;
};

EvalResult eval_lambda(const BandSystem& sys, double lambda,
                       std::span<const double> knots,
                       std::span<const double> z,
                       std::span<const double> w, double extra_ss,
                       double n_total) {
    const std::size_t k = knots.size();
    const std::size_t ni = k - 2;
    EvalResult res;
    const Factor f = factorize(sys, lambda);
    res.gamma = solve(f, sys.qt_z);
    res.fitted.assign(z.begin(), z.end());
    for (std::size_t j = 0; j < k; ++j) {
        double qg = 0.0;
        const double h_lo = j >= 1 ? knots[j] - knots[j - 1] : 0.0;
        const double h_hi = j + 1 < k ? knots[j + 1] - knots[j] : 0.0;
        if (j + 1 <= ni && j + 1 >= 1)  // column node j+1 contributes p = 1/h_hi
            qg += res.gamma[j] / h_hi;
        if (j >= 1 && j <= ni)  // column node j contributes q
            qg += res.gamma[j - 1] * (-(1.0 / h_lo) - 1.0 / h_hi);
        if (j >= 2)  // column node j-1 contributes r = 1/h_lo
            qg += res.gamma[j - 2] / h_lo;
        res.fitted[j] -= lambda / w[j] * qg;
    }
    res.rss = extra_ss;
    for (std::size_t j = 0; j < k; ++j) {
        const double r = z[j] - res.fitted[j];
        res.rss += w[j] * r * r;
    }
    res.edf = static_cast<double>(k) - lambda * trace_binv_c(f, sys);
    const double denom = n_total - res.edf;
    res.gcv = denom > 1e-10
                  ? n_total * res.rss / (denom * denom)
                  : std::numeric_limits<double>::infinity();
    return res;
}

}  // namespace

SplineFit fit_spline_weighted(std::span<const double> knots,
                              std::span<const double> z,
                              std::span<const double> weights,
                              const SmootherSpec& spec, double extra_ss,
                              double extra_n) {
    const std::size_t k = knots.size();
    if (z.size() != k || weights.size() != k)
        throw FitError("spline: mismatched knot/value/weight lengths");
    for (std::size_t i = 0; i + 1 < k; ++i)
        if (!(knots[i] < knots[i + 1]))
            throw FitError("spline: knots must be strictly increasing");
    for (double w : weights)
        if (!(w > 0.0)) throw FitError("spline: weights must be positive");

    double n_total = extra_n;
    for (double w : weights) n_total += w;

    SplineFit fit;
    fit.knots.assign(knots.begin(), knots.end());
    fit.second_derivs.assign(k, 0.0);

    if (k <= 2) {
        // a natural spline on <= 2 knots interpolates them exactly
        fit.values.assign(z.begin(), z.end());
        fit.lambda = 0.0;
        fit.edf = static_cast<double>(k);
        fit.gcv = 0.0;
        return fit;
    }

    const std::size_t ni = k - 2;
    BandSystem sys;
    sys.r_diag.resize(ni);
    sys.r_off.resize(ni > 1 ? ni - 1 : 0);
    sys.c_diag.resize(ni);
    sys.c_off1.resize(ni > 1 ? ni - 1 : 0);
    sys.c_off2.resize(ni > 2 ? ni - 2 : 0);
    sys.qt_z.resize(ni);

    std::vector<double> h(k - 1);
    for (std::size_t i = 0; i + 1 < k; ++i) h[i] = knots[i + 1] - knots[i];

    // interior node c = 1..k-2 maps to array slot c-1
    auto p = [&](std::size_t c) { return 1.0 / h[c - 1]; };
    auto q = [&](std::size_t c) { return -(1.0 / h[c - 1] + 1.0 / h[c]); };
    auto r = [&](std::size_t c) { return 1.0 / h[c]; };

    for (std::size_t c = 1; c <= ni; ++c) {
        sys.r_diag[c - 1] = (h[c - 1] + h[c]) / 3.0;
        sys.c_diag[c - 1] = p(c) * p(c) / weights[c - 1] +
                            q(c) * q(c) / weights[c] +
                            r(c) * r(c) / weights[c + 1];
        sys.qt_z[c - 1] = (z[c - 1] - z[c]) / h[c - 1] + (z[c + 1] - z[c]) / h[c];
        if (c + 1 <= ni) {
            sys.r_off[c - 1] = h[c] / 6.0;
            sys.c_off1[c - 1] =
                q(c) * p(c + 1) / weights[c] + r(c) * q(c + 1) / weights[c + 1];
        }
        if (c + 2 <= ni) sys.c_off2[c - 1] = r(c) * p(c + 2) / weights[c + 1];
    }

    double best_lambda = spec.lambda;
    if (spec.penalty == PenaltyRule::gcv) {
        // scale-free parameterisation: lambda = ratio * 256^(3s - 1), with the
        // ratio balancing the data and penalty bands (as in R's smooth.spline)
        double tr_c = 0.0, tr_r = 0.0;
        for (double v : sys.c_diag) tr_c += v;
        for (double v : sys.r_diag) tr_r += v;
        const double ratio = tr_c > 0.0 && tr_r > 0.0 ? tr_c / tr_r : 1.0;
        auto lambda_of = [&](double s) {
            return ratio * std::pow(256.0, 3.0 * s - 1.0);
        };
        auto gcv_of = [&](double s) {
            return eval_lambda(sys, lambda_of(s), knots, z, weights, extra_ss,
                               n_total)
                .gcv;
        };
        double best_s = -1.5, best_g = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 35; ++i) {
            const double s = -1.5 + 0.1 * i;
            const double g = gcv_of(s);
            if (g < best_g) {
                best_g = g;
                best_s = s;
            }
        }
        // golden-section refinement inside the winning bracket
        double a = best_s - 0.1, b = best_s + 0.1;
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
        double g1 = gcv_of(c1), g2 = gcv_of(c2);
        for (int it = 0; it < 40; ++it) {
            if (g1 < g2) {
                b = c2;
                c2 = c1;
                g2 = g1;
                c1 = b - gr * (b - a);
                g1 = gcv_of(c1);
            } else {
                a = c1;
                c1 = c2;
                g1 = g2;
                c2 = a + gr * (b - a);
                g2 = gcv_of(c2);
            }
        }
        best_lambda = lambda_of(0.5 * (a + b));
    }

    const EvalResult res =
        eval_lambda(sys, best_lambda, knots, z, weights, extra_ss, n_total);
    fit.values = res.fitted;
    for (std::size_t c = 1; c <= ni; ++c) fit.second_derivs[c] = res.gamma[c - 1];
    fit.lambda = best_lambda;
    fit.gcv = res.gcv;
    fit.edf = res.edf;
    return fit;
}

SplineFit fit_smoothing_spline(std::span<const double> x_sorted,
                               std::span<const double> y,
                               const SmootherSpec& spec) {
    const std::size_t n = x_sorted.size();
    if (n != y.size()) throw FitError("spline: |x| != |y|");
    if (n < 4) throw FitError("spline: need at least 4 points");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (x_sorted[i] > x_sorted[i + 1])
            throw FitError("spline: x must be sorted ascending");

    // collapse tied x to weighted means; track the within-tie scatter so GCV
    // still sees the full residual sum
    std::vector<double> knots, z, w;
    double within_ss = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < n && x_sorted[j] == x_sorted[i]) {
            sum += y[j];
            ++j;
        }
        const double cnt = static_cast<double>(j - i);
        const double m = sum / cnt;
        for (std::size_t t = i; t < j; ++t) within_ss += (y[t] - m) * (y[t] - m);
        knots.push_back(x_sorted[i]);
        z.push_back(m);
        w.push_back(cnt);
        i = j;
    }

    if (knots.size() == 1) {
        SplineFit fit;
        fit.knots = knots;
        fit.values = z;
        fit.second_derivs = {0.0};
        fit.edf = 1.0;
        return fit;
    }
    return fit_spline_weighted(knots, z, w, spec, within_ss, 0.0);
}

}  // namespace nvsd
