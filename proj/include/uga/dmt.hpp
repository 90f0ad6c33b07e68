#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "uga/pivotal.hpp"
#include "uga/random.hpp"

namespace uga {

/// C(n, m), exact. Throws std::overflow_error past 2^64 - 1 and
/// ContractViolation unless 1 <= m <= n.
std::uint64_t count_combinations(std::uint64_t n, std::uint64_t m);

/// C(n, m) as a double via lgamma, for counts that overflow 64 bits.
double approx_combinations(std::uint64_t n, std::uint64_t m);

/// (n / m)^m, the textbook lower bound on C(n, m).
double combinations_lower_bound(std::uint64_t n, std::uint64_t m);

/// Sampled marginal of a locus combination: per assignment, the mean and
/// standard error of `samples_per_cell` queries on genomes uniform outside
/// the combination. Rows are ordered as in MarginalTable.
struct SampledMarginalTable {
    std::vector<std::size_t> combo;
    std::vector<double> means;
    std::vector<double> standard_errors;
    std::uint64_t queries = 0;
};

SampledMarginalTable sampled_marginal(const PivotalFunction& f, std::span<const std::size_t> combo,
                                      std::size_t samples_per_cell, Rng& rng);

struct DmtScanReport {
    std::size_t order_scanned = 0;
    std::uint64_t combos_tested = 0;
    std::vector<std::vector<std::size_t>> detected_combos;
    std::uint64_t queries_used = 0;
    double threshold = 0.0;
    std::size_t samples_per_cell = 0;
};

/// Combinatorial differentiated-marginal scan. Visits every m-combination
/// in lexicographic order and flags it when some cell mean lies more than
/// z_threshold standard errors from zero. A cell whose samples are all equal
/// (standard error 0) is flagged when its mean is non-zero.
DmtScanReport dmt_scan(const PivotalFunction& f, std::size_t m, std::size_t samples_per_cell, double z_threshold,
                       Rng& rng);

/// Same scan, but each cell averages the oracle over every completion of the
/// remaining loci instead of sampling. Exact for noise-free functions.
/// Costs C(span, m) * 2^span queries; spans above 24 are rejected.
DmtScanReport dmt_scan_exhaustive(const PivotalFunction& f, std::size_t m, Rng& rng);

/// m-combinations whose exact marginal table has a non-zero entry.
std::vector<std::vector<std::size_t>> differentiated_combos(const PivotalFunction& f, std::size_t m);

/// Combines reports of disjoint shards of one scan.
DmtScanReport merge(const DmtScanReport& a, const DmtScanReport& b);

/// Steps `combo` to the next m-combination of 0..n-1 in lexicographic order.
/// Returns false after the last one.
bool next_combination(std::vector<std::size_t>& combo, std::size_t n);

} // namespace uga
