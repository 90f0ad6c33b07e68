#include <doctest.h>

#include <cmath>
#include <vector>

#include "uga/error.hpp"
#include "uga/random.hpp"
#include "uga/stats.hpp"

TEST_CASE("significance bound")
{
    const double b = uga::significance_bound(3000, 0.005);
    CHECK(b < 3e-7);
    CHECK(b == doctest::Approx(2.9536e-7).epsilon(1e-3));
    CHECK(uga::significance_bound(1, 0.5) == doctest::Approx(0.5));
    CHECK(uga::significance_bound(300, 0.005) == doctest::Approx(0.22226).epsilon(1e-4));
    CHECK_THROWS_AS(uga::significance_bound(0, 0.5), uga::ContractViolation);
    CHECK_THROWS_AS(uga::significance_bound(10, 1.0), uga::ContractViolation);
}

TEST_CASE("mean accumulator")
{
    uga::MeanAccumulator acc;
    CHECK_FALSE(acc.standard_error().has_value());
    acc.add(2.0);
    CHECK(acc.mean() == 2.0);
    CHECK_FALSE(acc.sample_variance().has_value());
    for (double x : {4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0}) {
        acc.add(x);
    }
    CHECK(acc.count() == 8);
    CHECK(acc.mean() == doctest::Approx(5.0));
    CHECK(*acc.sample_variance() == doctest::Approx(32.0 / 7.0));
    CHECK(*acc.standard_error() == doctest::Approx(std::sqrt(32.0 / 7.0 / 8.0)));
}

TEST_CASE("merging accumulators matches a single pass")
{
    uga::Rng rng(6);
    std::vector<double> xs(1000);
    for (auto& x : xs) {
        x = rng.normal(3.0, 2.0);
    }
    uga::MeanAccumulator whole;
    for (double x : xs) {
        whole.add(x);
    }
    for (std::size_t cut : {0U, 1U, 17U, 500U, 999U, 1000U}) {
        uga::MeanAccumulator a;
        uga::MeanAccumulator b;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            (i < cut ? a : b).add(xs[i]);
        }
        a.merge(b);
        CHECK(a.count() == whole.count());
        CHECK(a.mean() == doctest::Approx(whole.mean()).epsilon(1e-12));
        CHECK(*a.sample_variance() == doctest::Approx(*whole.sample_variance()).epsilon(1e-12));
    }
}

TEST_CASE("quantiles interpolate linearly")
{
    const std::vector<double> v{4.0, 1.0, 3.0, 2.0, 5.0};
    CHECK(uga::quantile(v, 0.0) == 1.0);
    CHECK(uga::quantile(v, 1.0) == 5.0);
    CHECK(uga::quantile(v, 0.5) == 3.0);
    CHECK(uga::quantile(v, 0.1) == doctest::Approx(1.4));
    const std::vector<double> one{7.0};
    CHECK(uga::quantile(one, 0.95) == 7.0);
    CHECK_THROWS_AS(uga::quantile(std::vector<double>{}, 0.5), uga::ContractViolation);
}

TEST_CASE("Kolmogorov survival function")
{
    CHECK(uga::kolmogorov_survival(0.0) == 1.0);
    CHECK(uga::kolmogorov_survival(1.3581) == doctest::Approx(0.05).epsilon(1e-3));
    CHECK(uga::kolmogorov_survival(1.6276) == doctest::Approx(0.01).epsilon(1e-3));
    CHECK(uga::kolmogorov_survival(0.5) == doctest::Approx(0.96394).epsilon(1e-4));
}

TEST_CASE("two-sample KS test")
{
    uga::Rng rng(9);
    std::vector<double> a(500);
    std::vector<double> b(500);
    std::vector<double> c(500);
    for (std::size_t i = 0; i < 500; ++i) {
        a[i] = rng.normal();
        b[i] = rng.normal();
        c[i] = rng.normal(0.5, 1.0);
    }
    auto same = uga::ks_two_sample(a, b);
    auto shifted = uga::ks_two_sample(a, c);
    CHECK(same.p_value > 0.01);
    CHECK(shifted.p_value < 1e-6);
    CHECK(uga::ks_two_sample(a, a).statistic == 0.0);

    const std::vector<double> x{0.0, 0.0, 1.0, 1.0};
    const std::vector<double> y{0.0, 1.0, 1.0, 1.0};
    CHECK(uga::ks_two_sample(x, y).statistic == doctest::Approx(0.25));
}
