#pragma once

#include <cstdint>
#include <random>

namespace uga {

/// Mixes a 64-bit value (SplitMix64 finalizer).
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed of replicate `index` under `seed_base`. Counter based, so adding
/// replicates never changes the seeds of existing ones.
std::uint64_t derive_seed(std::uint64_t seed_base, std::uint64_t index) noexcept;

/// Per-run random stream.
///
/// Wraps a 64-bit Mersenne Twister. Uniform doubles take the top 53 bits of
/// one engine word; standard normals use the Marsaglia polar transform with
/// the spare variate cached. Every derived variate is computed here rather
/// than through `std::*_distribution`, so a given seed yields the same
/// stream on any standard library.
class Rng {
public:
    using Engine = std::mt19937_64;

    explicit Rng(std::uint64_t seed) : engine_(seed) { }

    std::uint64_t bits() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform_open_low() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

    bool coin() { return (engine_() >> 63) != 0; }

    bool bernoulli(double p) { return uniform() < p; }

    /// Uniform integer in [0, n). Lemire's multiply-shift with rejection.
    std::uint64_t below(std::uint64_t n);

    double normal();
    double normal(double mean, double stddev) { return stddev == 0.0 ? mean : mean + stddev * normal(); }

    /// Fisher-Yates shuffle driven by `below`.
    template <typename It>
    void shuffle(It first, It last)
    {
        auto n = static_cast<std::uint64_t>(last - first);
        for (std::uint64_t i = n; i > 1; --i) {
            auto j = below(i);
            using std::swap;
            swap(first[i - 1], first[j]);
        }
    }

    Engine& engine() { return engine_; }

private:
    Engine engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace uga
