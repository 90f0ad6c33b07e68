#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uga/random.hpp"

namespace uga {

/// Fixed-length bitstring, packed 64 loci per word. Locus i lives in bit
/// (i % 64) of word (i / 64). Bits past the length are always zero.
class Genome {
public:
    Genome() = default;
    explicit Genome(std::size_t length);

    /// Parses "0101..."; any other character is a ContractViolation.
    static Genome from_string(std::string_view bits);
    static Genome random(std::size_t length, Rng& rng);

    std::size_t size() const noexcept { return length_; }
    bool empty() const noexcept { return length_ == 0; }

    bool operator[](std::size_t locus) const noexcept { return (words_[locus >> 6] >> (locus & 63)) & 1U; }
    bool at(std::size_t locus) const;
    void set(std::size_t locus, bool value) noexcept;
    void flip(std::size_t locus) noexcept { words_[locus >> 6] ^= std::uint64_t{1} << (locus & 63); }

    std::size_t count() const noexcept;
    Genome complement() const;

    std::span<const std::uint64_t> words() const noexcept { return words_; }
    std::span<std::uint64_t> words() noexcept { return words_; }

    /// Mask for the used bits of the last word.
    std::uint64_t tail_mask() const noexcept;

    std::string to_string() const;

    friend bool operator==(const Genome&, const Genome&) = default;

private:
    std::size_t length_ = 0;
    std::vector<std::uint64_t> words_;
};

inline std::size_t word_count(std::size_t length) noexcept { return (length + 63) / 64; }

/// Generation-stamped collection of equal-length genomes.
struct Population {
    std::vector<Genome> members;
    std::uint64_t generation = 0;

    std::size_t size() const noexcept { return members.size(); }
    std::size_t span() const noexcept { return members.empty() ? 0 : members.front().size(); }

    /// Each bit an independent fair coin.
    static Population uniform(std::size_t size, std::size_t length, Rng& rng);

    /// Throws unless non-empty, even-sized and of uniform length.
    void validate() const;

    friend bool operator==(const Population&, const Population&) = default;
};

} // namespace uga
