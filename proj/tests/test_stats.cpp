#include <doctest.h>

#include <cmath>

#include "nvsd/rng.hpp"
#include "nvsd/stats.hpp"
#include "oracles.hpp"

using namespace nvsd;

TEST_SUITE("stats") {

TEST_CASE("type-7 quantiles and IQR") {
    const std::vector<double> v{0, 1, 2, 3, 4};
    CHECK(stats::quantile(v, 0.25) == doctest::Approx(1.0));
    CHECK(stats::quantile(v, 0.75) == doctest::Approx(3.0));
    CHECK(stats::iqr(v) == doctest::Approx(2.0));
    const std::vector<double> w{1, 2, 3, 4};
    CHECK(stats::quantile(w, 0.25) == doctest::Approx(1.75));
    CHECK(stats::quantile(w, 0.5) == doctest::Approx(2.5));
    CHECK(stats::quantile(w, 1.0) == doctest::Approx(4.0));
    CHECK(stats::quantile(w, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("t-distribution p-values match quadrature") {
    for (double df : {3.0, 18.0, 100.0}) {
        for (double t : {0.5, 1.0, 2.449489742783178, 4.0}) {
            CHECK(stats::t_test_p_two_sided(t, df) ==
                  doctest::Approx(oracle::t_two_sided_p(t, df)).epsilon(1e-8));
        }
    }
    CHECK(stats::t_test_p_two_sided(0.0, 10.0) == doctest::Approx(1.0));
}

TEST_CASE("normal cdf reference points") {
    CHECK(stats::norm_cdf(0.0) == doctest::Approx(0.5));
    CHECK(stats::norm_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-9));
    CHECK(stats::norm_cdf(-1.959963984540054) == doctest::Approx(0.025).epsilon(1e-7));
}

TEST_CASE("KS test accepts uniform and rejects shifted samples") {
    Rng rng(8);
    std::vector<double> u(2000);
    for (auto& v : u) v = rng.uniform();
    CHECK(stats::ks_uniform(u).p_value > 0.01);

    std::vector<double> shifted(2000);
    for (auto& v : shifted) v = 0.5 * rng.uniform();
    CHECK(stats::ks_uniform(shifted).p_value < 1e-6);
}

TEST_CASE("sign test exact binomial arithmetic") {
    // P(X >= 8 | n=10, 1/2) = (45 + 10 + 1)/1024
    CHECK(stats::sign_test_greater_p(8, 2) ==
          doctest::Approx(56.0 / 1024.0).epsilon(1e-12));
    CHECK(stats::sign_test_greater_p(0, 5) == doctest::Approx(1.0));
    CHECK(stats::sign_test_greater_p(5, 0) ==
          doctest::Approx(1.0 / 32.0).epsilon(1e-12));
}

TEST_CASE("pearson_r hand value") {
    const std::vector<double> x{1, 2, 3, 4};
    const std::vector<double> y{2, 4, 6, 8};
    CHECK(stats::pearson_r(x, y) == doctest::Approx(1.0));
    const std::vector<double> z{4, 3, 2, 1};
    CHECK(stats::pearson_r(x, z) == doctest::Approx(-1.0));
}

}  // TEST_SUITE
