#pragma once

// Test-only oracles, independent of the library code paths they check.

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace oracle {

// Adaptive Simpson quadrature.
inline double simpson(const std::function<double(double)>& f, double a,
                      double b, double fa, double fm, double fb, double eps,
                      int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * eps)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, fa, flm, fm, eps / 2.0, depth - 1) +
           simpson(f, m, b, fm, frm, fb, eps / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double eps = 1e-12) {
    const double m = 0.5 * (a + b);
    return simpson(f, a, b, f(a), f(m), f(b), eps, 40);
}

// Student-t density.
inline double t_pdf(double x, double df) {
    const double c = std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0) -
                     0.5 * std::log(df * M_PI);
    return std::exp(c - (df + 1.0) / 2.0 * std::log1p(x * x / df));
}

// Two-sided t-test p-value by direct quadrature of the density tail.
inline double t_two_sided_p(double t, double df) {
    const double a = std::fabs(t);
    const double tail =
        integrate([df](double x) { return t_pdf(x, df); }, a, a + 60.0);
    return 2.0 * tail;
}

// Central finite differences of a scalar function of a vector.
inline std::vector<double> finite_difference_gradient(
    const std::function<double(std::span<const double>)>& f,
    std::vector<double> y, double h = 1e-6) {
    std::vector<double> g(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double orig = y[i];
        y[i] = orig + h;
        const double fp = f(y);
        y[i] = orig - h;
        const double fm = f(y);
        y[i] = orig;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

}  // namespace oracle
