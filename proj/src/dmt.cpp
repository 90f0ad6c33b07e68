#include "uga/dmt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "uga/error.hpp"

namespace uga {

namespace {

constexpr double kZeroTolerance = 1e-12;

void check_combo(const PivotalFunction& f, std::span<const std::size_t> combo)
{
    require(!combo.empty() && combo.size() <= 24, "combination size must be in 1..24");
    for (std::size_t j = 0; j < combo.size(); ++j) {
        require(combo[j] < f.span(), "combination locus outside span");
        for (std::size_t i = 0; i < j; ++i) {
            require(combo[i] != combo[j], "combination has duplicate loci");
        }
    }
}

void assign(Genome& g, std::span<const std::size_t> combo, std::size_t row)
{
    const auto k = combo.size();
    for (std::size_t j = 0; j < k; ++j) {
        g.set(combo[j], (row >> (k - 1 - j)) & 1U);
    }
}

bool cell_differentiated(double mean, double se, double z)
{
    if (se == 0.0) {
        return std::abs(mean) > kZeroTolerance;
    }
    return std::abs(mean) > z * se;
}

std::vector<std::size_t> first_combination(std::size_t m)
{
    std::vector<std::size_t> combo(m);
    std::iota(combo.begin(), combo.end(), std::size_t{0});
    return combo;
}

} // namespace

std::uint64_t count_combinations(std::uint64_t n, std::uint64_t m)
{
    require(m >= 1 && m <= n, "count_combinations needs 1 <= m <= n");
    m = std::min(m, n - m);
    unsigned __int128 c = 1;
    for (std::uint64_t i = 0; i < m; ++i) {
        c = c * (n - i) / (i + 1);
        if (c > static_cast<unsigned __int128>(UINT64_MAX)) {
            throw std::overflow_error("C(n, m) does not fit in 64 bits");
        }
    }
    return static_cast<std::uint64_t>(c);
}

double approx_combinations(std::uint64_t n, std::uint64_t m)
{
    require(m >= 1 && m <= n, "approx_combinations needs 1 <= m <= n");
    auto nd = static_cast<double>(n);
    auto md = static_cast<double>(m);
    return std::exp(std::lgamma(nd + 1.0) - std::lgamma(md + 1.0) - std::lgamma(nd - md + 1.0));
}

double combinations_lower_bound(std::uint64_t n, std::uint64_t m)
{
    require(m >= 1 && m <= n, "combinations_lower_bound needs 1 <= m <= n");
    return std::pow(static_cast<double>(n) / static_cast<double>(m), static_cast<double>(m));
}

bool next_combination(std::vector<std::size_t>& combo, std::size_t n)
{
    const auto m = combo.size();
    std::size_t i = m;
    while (i > 0) {
        --i;
        if (combo[i] < n - m + i) {
            ++combo[i];
            for (std::size_t j = i + 1; j < m; ++j) {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    return false;
}

SampledMarginalTable sampled_marginal(const PivotalFunction& f, std::span<const std::size_t> combo,
                                      std::size_t samples_per_cell, Rng& rng)
{
    require(samples_per_cell >= 2, "sampled_marginal needs at least 2 samples per cell");
    check_combo(f, combo);
    const std::size_t cells = std::size_t{1} << combo.size();

    SampledMarginalTable table;
    table.combo.assign(combo.begin(), combo.end());
    table.means.resize(cells);
    table.standard_errors.resize(cells);
    const auto n = static_cast<double>(samples_per_cell);
    for (std::size_t row = 0; row < cells; ++row) {
        // Welford
        double mean = 0.0;
        double m2 = 0.0;
        for (std::size_t s = 0; s < samples_per_cell; ++s) {
            Genome g = Genome::random(f.span(), rng);
            assign(g, combo, row);
            const double y = f.query(g, rng);
            const double d = y - mean;
            mean += d / static_cast<double>(s + 1);
            m2 += d * (y - mean);
        }
        table.means[row] = mean;
        table.standard_errors[row] = std::sqrt(m2 / (n - 1.0)) / std::sqrt(n);
    }
    table.queries = static_cast<std::uint64_t>(cells) * samples_per_cell;
    return table;
}

DmtScanReport dmt_scan(const PivotalFunction& f, std::size_t m, std::size_t samples_per_cell, double z_threshold,
                       Rng& rng)
{
    require(m >= 1 && m <= f.span(), "scan order must be in 1..span");
    DmtScanReport report;
    report.order_scanned = m;
    report.threshold = z_threshold;
    report.samples_per_cell = samples_per_cell;

    auto combo = first_combination(m);
    do {
        auto table = sampled_marginal(f, combo, samples_per_cell, rng);
        ++report.combos_tested;
        report.queries_used += table.queries;
        for (std::size_t row = 0; row < table.means.size(); ++row) {
            if (cell_differentiated(table.means[row], table.standard_errors[row], z_threshold)) {
                report.detected_combos.push_back(combo);
                break;
            }
        }
    } while (next_combination(combo, f.span()));
    return report;
}

DmtScanReport dmt_scan_exhaustive(const PivotalFunction& f, std::size_t m, Rng& rng)
{
    const auto span = f.span();
    require(m >= 1 && m <= span, "scan order must be in 1..span");
    require(span <= 24, "exhaustive scan is limited to spans of at most 24");

    DmtScanReport report;
    report.order_scanned = m;
    report.samples_per_cell = std::size_t{1} << (span - m);

    auto combo = first_combination(m);
    std::vector<std::size_t> rest;
    do {
        rest.clear();
        for (std::size_t locus = 0; locus < span; ++locus) {
            if (!std::binary_search(combo.begin(), combo.end(), locus)) {
                rest.push_back(locus);
            }
        }
        ++report.combos_tested;
        bool flagged = false;
        Genome g(span);
        for (std::size_t row = 0; row < (std::size_t{1} << m); ++row) {
            assign(g, combo, row);
            double sum = 0.0;
            for (std::size_t completion = 0; completion < report.samples_per_cell; ++completion) {
                assign(g, rest, completion);
                sum += f.query(g, rng);
            }
            report.queries_used += report.samples_per_cell;
            if (std::abs(sum / static_cast<double>(report.samples_per_cell)) > kZeroTolerance) {
                flagged = true;
            }
        }
        if (flagged) {
            report.detected_combos.push_back(combo);
        }
    } while (next_combination(combo, span));
    return report;
}

std::vector<std::vector<std::size_t>> differentiated_combos(const PivotalFunction& f, std::size_t m)
{
    require(m >= 1 && m <= f.span(), "order must be in 1..span");
    std::vector<std::vector<std::size_t>> found;
    auto combo = first_combination(m);
    do {
        auto table = exact_marginal(f, combo);
        if (std::any_of(table.entries.begin(), table.entries.end(),
                        [](double e) { return std::abs(e) > kZeroTolerance; })) {
            found.push_back(combo);
        }
    } while (next_combination(combo, f.span()));
    return found;
}

DmtScanReport merge(const DmtScanReport& a, const DmtScanReport& b)
{
    require(a.order_scanned == b.order_scanned, "cannot merge scans of different orders");
    DmtScanReport out = a;
    out.combos_tested += b.combos_tested;
    out.queries_used += b.queries_used;
    out.detected_combos.insert(out.detected_combos.end(), b.detected_combos.begin(), b.detected_combos.end());
    std::sort(out.detected_combos.begin(), out.detected_combos.end());
    return out;
}

} // namespace uga
