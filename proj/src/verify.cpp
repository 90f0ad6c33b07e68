#include "uga/verify.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "uga/dmt.hpp"
#include "uga/error.hpp"

namespace uga {

namespace {

std::string describe(const PivotalFunction& f, std::span<const std::size_t> combo, std::size_t row)
{
    std::ostringstream os;
    os << "type " << f.type() << " o=" << f.order() << " span=" << f.span() << " combo={";
    for (std::size_t j = 0; j < combo.size(); ++j) {
        os << (j ? "," : "") << combo[j] + 1;
    }
    os << "} row=" << row;
    return os.str();
}

void record(PropertyCheck& check, double error, double tolerance, const std::string& where)
{
    ++check.cases;
    check.worst_error = std::max(check.worst_error, error);
    if (!(error <= tolerance)) {
        ++check.failures;
        check.passed = false;
        if (check.first_failure.empty()) {
            check.first_failure = where;
        }
    }
}

/// Row of the table for the bitwise complement of `row`.
std::size_t complement_row(std::size_t row, std::size_t k)
{
    return ~row & ((std::size_t{1} << k) - 1);
}

/// Table rows put combo[0] in the most significant bit; patterns put
/// pivotal slot 0 in bit 0.
std::uint64_t row_to_pattern(std::size_t row, std::size_t k)
{
    std::uint64_t pattern = 0;
    for (std::size_t j = 0; j < k; ++j) {
        pattern |= static_cast<std::uint64_t>((row >> (k - 1 - j)) & 1U) << j;
    }
    return pattern;
}

} // namespace

std::vector<PropertyCheck> verify_marginal_properties(std::size_t descriptors_per_type, std::uint64_t seed,
                                                      std::size_t max_span, double tolerance)
{
    require(max_span >= 7, "max_span must leave room for order 6");
    Rng rng(seed);

    PropertyCheck t1_main; t1_main.name = "type1 single-locus marginals are zero";
    PropertyCheck t1_block; t1_block.name = "type1 pivotal block matches +delta / -2delta/(2^o-2)";
    PropertyCheck t1_balance; t1_balance.name = "type1 pivotal block averages to zero";
    PropertyCheck t2_sub; t2_sub.name = "type2 sub-order marginals are zero";
    PropertyCheck t2_block; t2_block.name = "type2 pivotal block matches parity pattern";
    PropertyCheck complement; complement.name = "complementary assignments have equal marginals";

    for (std::size_t n = 0; n < descriptors_per_type; ++n) {
        const auto order = 2 + static_cast<std::size_t>(rng.below(5));
        const auto span = order + 1 + static_cast<std::size_t>(rng.below(max_span - order));
        const double delta = 0.05 + rng.uniform();
        const double sigma = rng.uniform() * 2.0;
        auto f = random_pivotal(1, order, sigma, delta, span, rng);
        const auto& d = std::get<Type1Descriptor>(f.descriptor());

        for (std::size_t locus = 0; locus < span; ++locus) {
            const std::size_t combo[] = {locus};
            auto table = exact_marginal(f, combo);
            for (std::size_t row = 0; row < 2; ++row) {
                record(t1_main, std::abs(table.entries[row]), tolerance, describe(f, combo, row));
            }
        }

        auto block = exact_marginal(f, f.loci());
        const double off = -2.0 * delta / (std::pow(2.0, static_cast<double>(order)) - 2.0);
        double sum = 0.0;
        for (std::size_t row = 0; row < block.rows(); ++row) {
            const auto pattern = row_to_pattern(row, order);
            const auto full = (std::uint64_t{1} << order) - 1;
            const bool hit = pattern == d.value_pattern() || pattern == (~d.value_pattern() & full);
            const double expected = hit ? delta : off;
            record(t1_block, std::abs(block.entries[row] - expected), tolerance, describe(f, f.loci(), row));
            record(complement, std::abs(block.entries[row] - block.entries[complement_row(row, order)]), tolerance,
                   describe(f, f.loci(), row));
            sum += block.entries[row];
        }
        record(t1_balance, std::abs(sum / static_cast<double>(block.rows())), tolerance,
               describe(f, f.loci(), 0));
    }

    for (std::size_t n = 0; n < descriptors_per_type; ++n) {
        const auto order = 2 * (1 + static_cast<std::size_t>(rng.below(3)));
        const auto span = order + 1 + static_cast<std::size_t>(rng.below(max_span - order));
        const double delta = 0.05 + rng.uniform();
        const double sigma = rng.uniform() * 2.0;
        auto f = random_pivotal(2, order, sigma, delta, span, rng);

        for (std::size_t m = 1; m < order; ++m) {
            std::vector<std::size_t> combo(m);
            for (std::size_t j = 0; j < m; ++j) {
                combo[j] = j;
            }
            do {
                auto table = exact_marginal(f, combo);
                for (std::size_t row = 0; row < table.rows(); ++row) {
                    record(t2_sub, std::abs(table.entries[row]), tolerance, describe(f, combo, row));
                }
            } while (next_combination(combo, span));
        }

        auto block = exact_marginal(f, f.loci());
        for (std::size_t row = 0; row < block.rows(); ++row) {
            const double expected = (std::popcount(row) & 1) != 0 ? f.delta() : -f.delta();
            record(t2_block, std::abs(block.entries[row] - expected), tolerance, describe(f, f.loci(), row));
            record(complement, std::abs(block.entries[row] - block.entries[complement_row(row, order)]), tolerance,
                   describe(f, f.loci(), row));
        }
    }

    return {t1_main, t1_block, t1_balance, t2_sub, t2_block, complement};
}

} // namespace uga
