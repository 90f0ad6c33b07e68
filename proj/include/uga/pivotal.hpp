#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "uga/genome.hpp"
#include "uga/random.hpp"

namespace uga {

/// Type 1 pivotal function: mean `delta` when the pivotal bits equal the
/// pivotal values or their complement, mean -2*delta/(2^order - 2) otherwise,
/// Gaussian noise of deviation `sigma` either way.
///
/// Loci are 0-based. Order 1 is rejected because the off-pattern mean is
/// undefined there.
class Type1Descriptor {
public:
    Type1Descriptor(std::size_t order, double sigma, double delta, std::size_t span, std::vector<std::size_t> loci,
                    std::vector<bool> values);

    std::size_t order() const noexcept { return loci_.size(); }
    double sigma() const noexcept { return sigma_; }
    double delta() const noexcept { return delta_; }
    std::size_t span() const noexcept { return span_; }
    std::span<const std::size_t> loci() const noexcept { return loci_; }
    const std::vector<bool>& values() const noexcept { return values_; }

    /// Pivotal values packed as a pattern: bit j is values()[j].
    std::uint64_t value_pattern() const noexcept { return value_pattern_; }
    double off_pattern_mean() const noexcept { return off_mean_; }

    friend bool operator==(const Type1Descriptor&, const Type1Descriptor&) = default;

private:
    double sigma_;
    double delta_;
    std::size_t span_;
    std::vector<std::size_t> loci_;
    std::vector<bool> values_;
    std::uint64_t value_pattern_ = 0;
    double off_mean_ = 0.0;
};

/// Type 2 pivotal function: mean `delta` when the XOR of the pivotal bits is
/// 1, `-delta` otherwise. Order must be even.
class Type2Descriptor {
public:
    Type2Descriptor(std::size_t order, double sigma, double delta, std::size_t span, std::vector<std::size_t> loci);

    std::size_t order() const noexcept { return loci_.size(); }
    double sigma() const noexcept { return sigma_; }
    double delta() const noexcept { return delta_; }
    std::size_t span() const noexcept { return span_; }
    std::span<const std::size_t> loci() const noexcept { return loci_; }

    friend bool operator==(const Type2Descriptor&, const Type2Descriptor&) = default;

private:
    double sigma_;
    double delta_;
    std::size_t span_;
    std::vector<std::size_t> loci_;
};

/// Bits of `g` at `loci`, packed so that bit j holds g[loci[j]].
std::uint64_t pivotal_pattern(const Genome& g, std::span<const std::size_t> loci) noexcept;

double conditional_mean(const Type1Descriptor& d, std::uint64_t pattern) noexcept;
double conditional_mean(const Type2Descriptor& d, std::uint64_t pattern) noexcept;

double query_type1(const Type1Descriptor& d, const Genome& g, Rng& rng);
double query_type2(const Type2Descriptor& d, const Genome& g, Rng& rng);

/// Span order+1, loci 0..order-1, all-ones values. Idempotent.
Type1Descriptor basic_form_type1(const Type1Descriptor& d);
/// Span order+1, loci 0..order-1. Idempotent.
Type2Descriptor basic_form_type2(const Type2Descriptor& d);

/// Either kind of pivotal function behind one value type. Satisfies
/// StochasticFitness.
class PivotalFunction {
public:
    using Descriptor = std::variant<Type1Descriptor, Type2Descriptor>;

    PivotalFunction(Type1Descriptor d) : descriptor_(std::move(d)) { }
    PivotalFunction(Type2Descriptor d) : descriptor_(std::move(d)) { }

    const Descriptor& descriptor() const noexcept { return descriptor_; }
    int type() const noexcept { return descriptor_.index() == 0 ? 1 : 2; }

    std::size_t span() const;
    std::size_t order() const;
    double sigma() const;
    double delta() const;
    std::span<const std::size_t> loci() const;

    double query(const Genome& g, Rng& rng) const;
    /// Mean of the distribution `query` draws from for `g`.
    double mean(const Genome& g) const;
    double mean_for_pattern(std::uint64_t pattern) const;

    PivotalFunction basic_form() const;

    friend bool operator==(const PivotalFunction&, const PivotalFunction&) = default;

private:
    Descriptor descriptor_;
};

/// Expected marginal of every bit assignment to a locus combination, other
/// loci uniform. Row index a assigns combo[j] the bit (a >> (k-1-j)) & 1, so
/// rows enumerate assignment strings in lexicographic order.
struct MarginalTable {
    std::vector<std::size_t> combo;
    std::vector<double> entries;

    std::size_t rows() const noexcept { return entries.size(); }
    std::string assignment(std::size_t row) const;
    double entry(std::string_view assignment) const;
};

/// Exact expected marginals, computed from the conditional means over the
/// pivotal loci only (O(2^order) per row).
MarginalTable exact_marginal(const PivotalFunction& f, std::span<const std::size_t> combo);

/// Draws a pivotal function with the given order and span, loci and values
/// uniform at random. Used by the property suites and the CLI.
PivotalFunction random_pivotal(int type, std::size_t order, double sigma, double delta, std::size_t span, Rng& rng);

} // namespace uga
