#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

namespace uga {

/// (1 - a)^n: the chance of n successes in n trials when each trial fails
/// with probability at least a. Observing n-for-n rejects "failure
/// probability >= a" at this level.
double significance_bound(std::uint64_t successes_required, double per_trial_probability);

/// Running mean and sum of squared deviations. Merging is Chan's pairwise
/// update, so shards can be combined in any grouping.
class MeanAccumulator {
public:
    void add(double x) noexcept;
    void merge(const MeanAccumulator& other) noexcept;

    std::uint64_t count() const noexcept { return n_; }
    double mean() const noexcept { return mean_; }
    /// Sample (n - 1) variance; absent below two observations.
    std::optional<double> sample_variance() const noexcept;
    /// Sample standard deviation over sqrt(n); absent below two observations.
    std::optional<double> standard_error() const noexcept;

private:
    std::uint64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// Linear-interpolation quantile (Hyndman-Fan type 7) of unsorted data.
double quantile(std::span<const double> values, double q);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic Kolmogorov
/// distribution for the p-value.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Survival function of the Kolmogorov distribution, P(K > x).
double kolmogorov_survival(double x);

} // namespace uga
