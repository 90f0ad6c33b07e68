#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "uga/pivotal.hpp"

namespace uga {

struct PropertyCheck {
    std::string name;
    bool passed = true;
    std::size_t cases = 0;
    std::size_t failures = 0;
    double worst_error = 0.0;
    std::string first_failure;
};

/// Analytic no-main-effect checks on randomized pivotal functions:
///  - type 1: every single-locus marginal is 0, the pivotal-block table
///    is delta on the pivotal values and their complement and
///    -2*delta/(2^o - 2) elsewhere, and the block averages to 0;
///  - type 2: every combination of fewer than o loci has an all-zero
///    marginal and the block table is +delta on odd parity, -delta on even;
///  - both: complementary assignments have equal marginals.
/// Orders are drawn from 2..6 (type 1) and {2, 4, 6} (type 2), spans up to
/// `max_span`.
std::vector<PropertyCheck> verify_marginal_properties(std::size_t descriptors_per_type, std::uint64_t seed,
                                                      std::size_t max_span = 30, double tolerance = 1e-12);

} // namespace uga
