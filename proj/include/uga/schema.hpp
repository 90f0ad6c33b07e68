#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "uga/genome.hpp"

namespace uga {

/// Set of defining positions (0-based loci). Order matters for the schema
/// strings reported against it: character j is the bit at positions[j].
class SchemaPartition {
public:
    SchemaPartition() = default;
    explicit SchemaPartition(std::vector<std::size_t> positions);

    std::span<const std::size_t> positions() const noexcept { return positions_; }
    std::size_t order() const noexcept { return positions_.size(); }

    /// Throws if any position is >= span.
    void validate_for(std::size_t span) const;

    /// The first `order` loci, 0..order-1.
    static SchemaPartition leading(std::size_t order);

private:
    std::vector<std::size_t> positions_;
};

struct DominantSchema {
    std::string schema;
    double fraction = 0.0;
    std::size_t members = 0;
    friend bool operator==(const DominantSchema&, const DominantSchema&) = default;
};

/// Count of 1-bits at `locus` across the population.
std::size_t one_count(const Population& p, std::size_t locus);

/// Fraction of the population with a 1 at `locus`.
double one_frequency(const Population& p, std::size_t locus);
double zero_frequency(const Population& p, std::size_t locus);

/// One-counts of every locus in one pass.
std::vector<std::uint32_t> one_counts(const Population& p);

/// Most populous schema of the partition. Ties go to the lexicographically
/// smallest schema string.
DominantSchema dominant_schema(const Population& p, const SchemaPartition& partition);

} // namespace uga
