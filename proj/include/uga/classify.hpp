#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "uga/genome.hpp"
#include "uga/pivotal.hpp"
#include "uga/schema.hpp"
#include "uga/sga.hpp"

namespace uga {

/// Classification band: a locus whose final one-frequency x satisfies
/// lower <= x <= upper is non-pivotal. Bounds are inclusive.
struct FrequencyBand {
    double lower = 0.1;
    double upper = 0.9;

    bool contains(double x) const noexcept { return lower <= x && x <= upper; }
    /// Exact test of count / population_size against the band.
    bool contains(std::size_t count, std::size_t population_size) const noexcept;
};

struct ClassificationResult {
    std::vector<std::size_t> pivotal_loci;
    std::vector<std::size_t> non_pivotal_loci;
    std::uint64_t generation_used = 0;
    std::vector<double> frequencies;
    std::uint64_t queries = 0;
};

/// Splits the loci of a population by their one-frequency.
ClassificationResult classify_population(const Population& p, FrequencyBand band = {});

/// Runs the SGA on f for n generations and classifies every locus by its
/// final one-frequency.
ClassificationResult classify_loci(const PivotalFunction& f, std::uint64_t generations, GAConfig cfg,
                                   FrequencyBand band = {});

/// Misclassified loci against f's true pivotal set.
std::size_t count_misclassified(const ClassificationResult& result, const PivotalFunction& f);

} // namespace uga
