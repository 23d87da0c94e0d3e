#include <doctest.h>

#include <cmath>
#include <numeric>

#include "nvsd/assoc.hpp"
#include "nvsd/common.hpp"
#include "nvsd/rng.hpp"
#include "nvsd/stats.hpp"
#include "oracles.hpp"

using namespace nvsd;

TEST_SUITE("assoc") {

TEST_CASE("sort_pairs keeps pairing and breaks ties by index") {
    PairedSample s{{3, 1, 2}, {30, 10, 20}};
    const auto sorted = sort_pairs(s);
    CHECK(sorted.x == std::vector<double>{1, 2, 3});
    CHECK(sorted.y == std::vector<double>{10, 20, 30});

    PairedSample pre{{1, 2, 3, 4}, {5, 6, 7, 8}};
    const auto same = sort_pairs(pre);
    CHECK(same.x == pre.x);
    CHECK(same.y == pre.y);

    PairedSample tied{{1, 1, 2}, {5, 7, 9}};
    const auto tb = sort_pairs(tied);
    CHECK(tb.y == std::vector<double>{5, 7, 9});
}

TEST_CASE("sort_pairs rejects bad samples") {
    CHECK_THROWS_AS(sort_pairs(PairedSample{{1, 2}, {1, 2}}),
                    InvalidSampleError);
    CHECK_THROWS_AS(sort_pairs(PairedSample{{1, 2, 3}, {1, 2}}),
                    InvalidSampleError);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(sort_pairs(PairedSample{{1, 2, inf}, {1, 2, 3}}),
                    InvalidSampleError);
}

TEST_CASE("s_delta direct arithmetic") {
    CHECK(s_delta(std::vector<double>{1, 2, 3, 4}) == doctest::Approx(0.75));
    CHECK(s_delta(std::vector<double>{5, 5, 5, 5, 5}) == 0.0);
    CHECK_THROWS_AS(s_delta(std::vector<double>{1, 2}), InvalidSampleError);
}

TEST_CASE("s_delta estimates the noise variance of pure noise") {
    // y ~ N(0,1) independent of x: the mean of S_delta over replicates sits
    // at sigma^2 = 1 (up to the (n-1)/(n-2) factor)
    Rng rng(2024);
    const std::size_t n = 10000;
    double total = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> y(n);
        for (auto& v : y) v = rng.normal();
        total += s_delta(y);  // independence: any fixed order is a random order
    }
    CHECK(total / 100.0 == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("s_delta convergence sharpens with n") {
    // light version of the variance-estimator convergence property
    Rng rng(7);
    auto mean_err = [&](std::size_t n, int reps) {
        double total = 0.0;
        for (int r = 0; r < reps; ++r) {
            std::vector<double> x(n), y(n);
            for (std::size_t i = 0; i < n; ++i) x[i] = rng.uniform();
            auto order = sort_order(x);
            for (std::size_t i = 0; i < n; ++i)
                y[i] = std::sin(4.0 * x[i]) + rng.normal();
            total += s_delta_ordered(y, order);
        }
        return std::fabs(total / reps - 1.0);
    };
    const double e100 = mean_err(100, 400);
    const double e1000 = mean_err(1000, 200);
    CHECK(e1000 < e100);
}

TEST_CASE("explained_fraction examples") {
    // noiseless sine: nearly all variance is attributed to x
    Rng rng(11);
    const std::size_t n = 5000;
    std::vector<double> x(n);
    for (auto& v : x) v = rng.uniform(0.0, 2.0 * M_PI);
    std::sort(x.begin(), x.end());
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = std::sin(x[i]);
    CHECK(explained_fraction(y) >= 0.95);

    // independent response: fraction fluctuates around zero
    double total = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> z(n);
        for (auto& v : z) v = rng.normal();
        total += explained_fraction(z);
    }
    CHECK(std::fabs(total / 100.0) <= 0.05);

    // exact arithmetic: y = x = [1,2,3,4]
    const double frac = explained_fraction(std::vector<double>{1, 2, 3, 4});
    // sigma2 = 5/3, S_delta = 0.75 -> 1 - 0.75/(5/3) = 0.55
    CHECK(frac == doctest::Approx(0.55).epsilon(1e-12));

    CHECK_THROWS_AS(explained_fraction(std::vector<double>{2, 2, 2, 2}),
                    DegenerateResponseError);
}

TEST_CASE("permutation p-value hits the floor for a noiseless sine") {
    Rng rng(5);
    const std::size_t n = 500;
    PairedSample s;
    s.x.resize(n);
    s.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.x[i] = rng.uniform(0.0, 2.0 * M_PI);
        s.y[i] = std::sin(s.x[i]);
    }
    PermutationPlan plan(1000, 42);
    CHECK(permutation_p(s, plan) == doctest::Approx(1.0 / 1001.0));
}

TEST_CASE("add-one smoothing arithmetic at m=1") {
    // observed below the single null draw -> p = (1+0)/2
    const std::vector<double> null_stats{10.0};
    CHECK(permutation_p_from_null(1.0, null_stats) == doctest::Approx(0.5));
    // and through the full path: an ordered response has a small observed
    // S_delta, so one shuffle lands above it
    PairedSample s;
    for (int i = 0; i < 10; ++i) {
        s.x.push_back(i);
        s.y.push_back(i);
    }
    PermutationPlan plan(1, 0);
    const auto null_built = permutation_null(s.y, 1, 0);
    REQUIRE(null_built[0] > s_delta(s.y));
    CHECK(permutation_p(s, plan) == doctest::Approx(0.5));
}

TEST_CASE("null p-values are uniform under independence") {
    Rng rng(99);
    const std::size_t n = 100, m = 199;
    std::vector<double> pvals;
    for (int rep = 0; rep < 400; ++rep) {
        PairedSample s;
        s.x.resize(n);
        s.y.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            s.x[i] = rng.normal();
            s.y[i] = rng.normal();
        }
        PermutationPlan plan(m, rng.next());
        pvals.push_back(permutation_p(s, plan));
    }
    const auto ks = stats::ks_uniform(pvals);
    CHECK(ks.p_value > 0.005);
}

TEST_CASE("permutation null cache keys on the exact response") {
    std::vector<double> y{1, 2, 3, 4, 5, 6};
    PermutationPlan plan(50, 7);
    plan.ensure_null(y);
    REQUIRE(plan.cached_null.has_value());
    // poison the cache; a second call with identical y must not rebuild
    (*plan.cached_null)[0] = -123.0;
    const auto reused = plan.ensure_null(y);
    CHECK(reused[0] == -123.0);
    // any change to y rebuilds
    y[3] += 1e-9;
    const auto rebuilt = plan.ensure_null(y);
    CHECK(rebuilt[0] != -123.0);
}

TEST_CASE("pearson p-value examples") {
    PairedSample lin;
    Rng rng(3);
    for (int i = 0; i < 30; ++i) {
        const double x = rng.normal();
        lin.x.push_back(x);
        lin.y.push_back(2.0 * x + 1.0);
    }
    CHECK(pearson_p(lin) < 1e-12);

    PairedSample ortho{{-1, 0, 1}, {0, 1, 0}};
    CHECK(pearson_p(ortho) == doctest::Approx(1.0));

    // exact r = 0.5 at n = 20, checked against a quadrature oracle
    const std::size_t n = 20;
    std::vector<double> x(n), u(n);
    Rng rng2(17);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng2.normal();
        u[i] = rng2.normal();
    }
    const double mx = stats::mean(x);
    for (auto& v : x) v -= mx;
    // Gram-Schmidt: make u orthogonal to x, then mix to get r = 0.5 exactly
    const double mu = stats::mean(u);
    for (auto& v : u) v -= mu;
    double xu = 0.0, xx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        xu += x[i] * u[i];
        xx += x[i] * x[i];
    }
    for (std::size_t i = 0; i < n; ++i) u[i] -= xu / xx * x[i];
    double uu = 0.0;
    for (double v : u) uu += v * v;
    PairedSample mixed;
    mixed.x = x;
    mixed.y.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        mixed.y[i] = 0.5 * x[i] / std::sqrt(xx) +
                     std::sqrt(0.75) * u[i] / std::sqrt(uu);
    CHECK(stats::pearson_r(mixed.x, mixed.y) == doctest::Approx(0.5).epsilon(1e-12));
    const double p = pearson_p(mixed);
    const double t = 0.5 * std::sqrt(18.0 / 0.75);
    CHECK(p == doctest::Approx(oracle::t_two_sided_p(t, 18.0)).epsilon(1e-8));
    CHECK(p == doctest::Approx(0.0248).epsilon(0.02));

    CHECK_THROWS_AS(pearson_p(PairedSample{{1, 1, 1}, {1, 2, 3}}),
                    DegenerateInputError);
}

TEST_CASE("combined_p Box-1 arithmetic") {
    CHECK(combined_p(0.01, 0.03) == doctest::Approx(0.02));
    CHECK(combined_p(0.9, 0.8) == doctest::Approx(1.0));
    CHECK(combined_p(0.0005, 0.5) == doctest::Approx(0.001));
}

TEST_CASE("S_delta shift and scale behaviour") {
    Rng rng(31);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 5 + rng.below(50);
        std::vector<double> y(n);
        for (auto& v : y) v = rng.normal(0.0, 3.0);
        const double base = s_delta(y);

        std::vector<double> shifted = y;
        for (auto& v : shifted) v += 17.5;
        CHECK(s_delta(shifted) == doctest::Approx(base).epsilon(1e-10));

        std::vector<double> scaled = y;
        for (auto& v : scaled) v *= -2.5;
        CHECK(s_delta(scaled) == doctest::Approx(base * 6.25).epsilon(1e-10));

        std::vector<double> rev(y.rbegin(), y.rend());
        CHECK(s_delta(rev) == doctest::Approx(base).epsilon(1e-14));
    }
}

TEST_CASE("scoring is deterministic given a seed") {
    Rng rng(1234);
    const std::size_t n = 80;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng.normal();
        y[i] = std::sin(x[i]) + rng.normal(0.0, 0.3);
    }
    const auto order = sort_order(x);
    const auto null1 = permutation_null(y, 500, 77);
    const auto null2 = permutation_null(y, 500, 77);
    REQUIRE(null1 == null2);
    const auto s1 = score_predictor(x, y, order, null1);
    const auto s2 = score_predictor(x, y, order, null2);
    CHECK(s1.s_delta == s2.s_delta);
    CHECK(s1.p_dcol == s2.p_dcol);
    CHECK(s1.p_linear == s2.p_linear);
    CHECK(s1.p_combined == s2.p_combined);
}

}  // TEST_SUITE
