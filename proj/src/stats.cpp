#include "uga/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "uga/error.hpp"

namespace uga {

double significance_bound(std::uint64_t successes_required, double per_trial_probability)
{
    require(successes_required >= 1, "significance_bound needs n >= 1");
    require(per_trial_probability > 0.0 && per_trial_probability < 1.0, "significance_bound needs 0 < a < 1");
    return std::exp(static_cast<double>(successes_required) * std::log1p(-per_trial_probability));
}

void MeanAccumulator::add(double x) noexcept
{
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
}

void MeanAccumulator::merge(const MeanAccumulator& other) noexcept
{
    if (other.n_ == 0) {
        return;
    }
    if (n_ == 0) {
        *this = other;
        return;
    }
    const auto na = static_cast<double>(n_);
    const auto nb = static_cast<double>(other.n_);
    const double d = other.mean_ - mean_;
    const double total = na + nb;
    mean_ += d * nb / total;
    m2_ += other.m2_ + d * d * na * nb / total;
    n_ += other.n_;
}

std::optional<double> MeanAccumulator::sample_variance() const noexcept
{
    if (n_ < 2) {
        return std::nullopt;
    }
    return m2_ / static_cast<double>(n_ - 1);
}

std::optional<double> MeanAccumulator::standard_error() const noexcept
{
    auto var = sample_variance();
    if (!var) {
        return std::nullopt;
    }
    return std::sqrt(*var / static_cast<double>(n_));
}

double quantile(std::span<const double> values, double q)
{
    require(!values.empty(), "quantile of an empty sample");
    require(q >= 0.0 && q <= 1.0, "quantile level must lie in [0, 1]");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double h = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double kolmogorov_survival(double x)
{
    if (x <= 0.0) {
        return 1.0;
    }
    // The alternating series converges slowly near zero, where the survival
    // function is within 1e-12 of 1 for every x below 0.2.
    if (x < 0.2) {
        return 1.0;
    }
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += (k % 2 == 1 ? term : -term);
        if (term < 1e-17) {
            break;
        }
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b)
{
    require(!a.empty() && !b.empty(), "KS test needs two non-empty samples");
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());

    const auto n = static_cast<double>(x.size());
    const auto m = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    // Step both empirical CDFs past each distinct value before comparing, so
    // ties are handled correctly.
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) {
            ++i;
        }
        while (j < y.size() && y[j] == v) {
            ++j;
        }
        d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }

    const double en = std::sqrt(n * m / (n + m));
    KsResult r;
    r.statistic = d;
    r.p_value = kolmogorov_survival((en + 0.12 + 0.11 / en) * d);
    return r;
}

} // namespace uga
