#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "uga/classify.hpp"
#include "uga/error.hpp"
#include "uga/sga.hpp"

using uga::Genome;
using uga::Rng;

TEST_SUITE("sigma_scale")
{
    TEST_CASE("equal values scale to one")
    {
        const std::vector<double> raw(6, 0.1 * 3.0);
        for (double h : uga::sigma_scale(raw)) {
            CHECK(h == 1.0);
        }
        CHECK(uga::sigma_scale(std::vector<double>{-4.2}) == std::vector<double>{1.0});
    }

    TEST_CASE("hand-computed values")
    {
        // mean 2, population sd sqrt(2/3)
        const std::vector<double> raw{1.0, 2.0, 3.0};
        const double sd = std::sqrt(2.0 / 3.0);
        auto h = uga::sigma_scale(raw);
        CHECK(h[0] == doctest::Approx(std::max(0.0, 1.0 - 1.0 / sd)));
        CHECK(h[0] == 0.0);
        CHECK(h[1] == doctest::Approx(1.0));
        CHECK(h[2] == doctest::Approx(1.0 + 1.0 / sd));
    }

    TEST_CASE("value at the mean scales to one and two deviations below clamps to zero")
    {
        // mean 0, population sd exactly 1
        const std::vector<double> raw{-2.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
        auto h = uga::sigma_scale(raw);
        CHECK(h[0] == 0.0);
        CHECK(h[1] == 3.0);
        CHECK(h[2] == 1.0);
    }

    TEST_CASE("outputs are non-negative and some are positive")
    {
        Rng rng(4);
        for (int trial = 0; trial < 500; ++trial) {
            std::vector<double> raw(2 + rng.below(50));
            for (auto& x : raw) {
                x = rng.normal(0.0, 1.0 + 10.0 * rng.uniform());
            }
            auto h = uga::sigma_scale(raw);
            REQUIRE(std::all_of(h.begin(), h.end(), [](double v) { return v >= 0.0; }));
            REQUIRE(std::any_of(h.begin(), h.end(), [](double v) { return v > 0.0; }));
        }
    }

    TEST_CASE("empty input is rejected")
    {
        CHECK_THROWS_AS(uga::sigma_scale(std::vector<double>{}), uga::ContractViolation);
    }
}

TEST_SUITE("sus_select")
{
    std::map<std::size_t, int> tally(const std::vector<std::size_t>& picks)
    {
        std::map<std::size_t, int> t;
        for (auto i : picks) {
            ++t[i];
        }
        return t;
    }

    TEST_CASE("integral expectations are met exactly")
    {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            Rng rng(seed);
            auto a = tally(uga::sus_select(std::vector<double>{2, 1, 1}, 4, rng));
            CHECK(a[0] == 2);
            CHECK(a[1] == 1);
            CHECK(a[2] == 1);

            auto b = tally(uga::sus_select(std::vector<double>{1, 1}, 2, rng));
            CHECK(b[0] == 1);
            CHECK(b[1] == 1);

            auto c = tally(uga::sus_select(std::vector<double>{3, 1}, 4, rng));
            CHECK(c[0] == 3);
            CHECK(c[1] == 1);
        }
    }

    TEST_CASE("copies are floor or ceiling of expectation")
    {
        Rng rng(77);
        for (int trial = 0; trial < 10000; ++trial) {
            const auto n = 1 + static_cast<std::size_t>(rng.below(40));
            const auto count = 1 + static_cast<std::size_t>(rng.below(60));
            std::vector<double> w(n);
            for (auto& x : w) {
                x = rng.bernoulli(0.2) ? 0.0 : rng.uniform() * 3.0;
            }
            if (std::all_of(w.begin(), w.end(), [](double x) { return x == 0.0; })) {
                w[0] = 1.0;
            }
            double total = 0.0;
            for (double x : w) {
                total += x;
            }
            auto picks = uga::sus_select(w, count, rng);
            REQUIRE(picks.size() == count);
            auto t = tally(picks);
            for (std::size_t i = 0; i < n; ++i) {
                const double e = static_cast<double>(count) * w[i] / total;
                const int copies = t[i];
                REQUIRE(copies >= static_cast<int>(std::floor(e + 1e-9)) - 0);
                REQUIRE(copies <= static_cast<int>(std::ceil(e - 1e-9)));
            }
        }
    }

    TEST_CASE("all-zero weights are rejected")
    {
        Rng rng(1);
        CHECK_THROWS_AS(uga::sus_select(std::vector<double>{0, 0, 0}, 3, rng), uga::ContractViolation);
        CHECK_THROWS_AS(uga::sus_select(std::vector<double>{1}, 0, rng), uga::ContractViolation);
    }
}

TEST_SUITE("uniform_crossover")
{
    TEST_CASE("identical parents give identical children")
    {
        Rng rng(8);
        auto x = Genome::random(77, rng);
        auto [a, b] = uga::uniform_crossover(x, x, rng);
        CHECK(a == x);
        CHECK(b == x);
    }

    TEST_CASE("mask convention")
    {
        auto [a, b] = uga::apply_crossover_mask(Genome::from_string("1111"), Genome::from_string("0000"),
                                                Genome::from_string("1010"));
        CHECK(a.to_string() == "1010");
        CHECK(b.to_string() == "0101");
    }

    TEST_CASE("each locus keeps its pair of bits")
    {
        Rng rng(12);
        for (int trial = 0; trial < 200; ++trial) {
            const auto len = 1 + static_cast<std::size_t>(rng.below(150));
            auto x = Genome::random(len, rng);
            auto y = Genome::random(len, rng);
            auto [a, b] = uga::uniform_crossover(x, y, rng);
            for (std::size_t i = 0; i < len; ++i) {
                REQUIRE(a[i] + b[i] == x[i] + y[i]);
                REQUIRE((a[i] == x[i] || a[i] == y[i]));
            }
        }
    }

    TEST_CASE("mask bits are fair coins")
    {
        Rng rng(13);
        const std::size_t len = 100;
        const auto x = Genome::from_string(std::string(len, '1'));
        const Genome y(len);
        std::size_t from_x = 0;
        const int trials = 2000;
        for (int t = 0; t < trials; ++t) {
            from_x += uga::uniform_crossover(x, y, rng).first.count();
        }
        const double n = static_cast<double>(len) * trials;
        CHECK(std::abs(static_cast<double>(from_x) / n - 0.5) < 4.0 * 0.5 / std::sqrt(n));
    }

    TEST_CASE("length mismatch is rejected")
    {
        Rng rng(1);
        CHECK_THROWS_AS(uga::uniform_crossover(Genome(3), Genome(4), rng), uga::ContractViolation);
    }
}

TEST_SUITE("mutate")
{
    TEST_CASE("rate zero and rate one")
    {
        Rng rng(3);
        auto g = Genome::random(70, rng);
        CHECK(uga::mutate(g, 0.0, rng) == g);
        CHECK(uga::mutate(g, 1.0, rng) == g.complement());
        CHECK_THROWS_AS(uga::mutate(g, 1.5, rng), uga::ContractViolation);
    }

    TEST_CASE("empirical flip rate over a million genome mutations")
    {
        Rng rng(2024);
        const auto g = Genome::from_string("0110");
        std::uint64_t flips = 0;
        std::uint64_t untouched = 0;
        const int n = 1000000;
        for (int i = 0; i < n; ++i) {
            auto m = uga::mutate(g, 0.003, rng);
            std::size_t changed = 0;
            for (std::size_t b = 0; b < 4; ++b) {
                changed += m[b] != g[b] ? 1 : 0;
            }
            flips += changed;
            untouched += changed == 0 ? 1 : 0;
        }
        const double rate = static_cast<double>(flips) / (4.0 * n);
        CHECK(std::abs(rate - 0.003) <= 3e-4);
        // Independent bits: P(no flip) = 0.997^4.
        const double p0 = std::pow(0.997, 4);
        CHECK(std::abs(static_cast<double>(untouched) / n - p0) < 4.0 * std::sqrt(p0 * (1 - p0) / n));
    }

    TEST_CASE("population-wide mutation matches the per-bit rate")
    {
        Rng rng(6);
        std::vector<Genome> pop(500, Genome(37));
        std::uint64_t flips = 0;
        const int rounds = 200;
        for (int r = 0; r < rounds; ++r) {
            for (auto& g : pop) {
                g = Genome(37);
            }
            uga::mutate_all(pop, 0.01, rng);
            for (const auto& g : pop) {
                flips += g.count();
            }
        }
        const double n = 500.0 * 37.0 * rounds;
        const double rate = static_cast<double>(flips) / n;
        CHECK(std::abs(rate - 0.01) < 4.0 * std::sqrt(0.01 * 0.99 / n));
    }
}

TEST_CASE("crossover phase conserves every locus's bit pool")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        const auto len = 1 + static_cast<std::size_t>(rng.below(130));
        auto pool = uga::Population::uniform(40, len, rng);
        std::vector<std::size_t> order(40);
        for (auto& i : order) {
            i = static_cast<std::size_t>(rng.below(40));
        }
        std::vector<Genome> children(40);
        uga::recombine(pool, order, seed % 2 == 0 ? 1.0 : 0.6, rng, children);

        uga::Population parents;
        for (auto i : order) {
            parents.members.push_back(pool.members[i]);
        }
        uga::Population kids;
        kids.members = children;
        CHECK(uga::one_counts(parents) == uga::one_counts(kids));
    }
}
