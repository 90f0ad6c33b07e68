#include "uga/genome.hpp"

#include <bit>

#include "uga/error.hpp"

namespace uga {

Genome::Genome(std::size_t length) : length_(length), words_(word_count(length), 0) { }

Genome Genome::from_string(std::string_view bits)
{
    Genome g(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        char c = bits[i];
        require(c == '0' || c == '1', "genome string may only contain '0' and '1'");
        g.set(i, c == '1');
    }
    return g;
}

Genome Genome::random(std::size_t length, Rng& rng)
{
    Genome g(length);
    for (auto& w : g.words_) {
        w = rng.bits();
    }
    if (!g.words_.empty()) {
        g.words_.back() &= g.tail_mask();
    }
    return g;
}

bool Genome::at(std::size_t locus) const
{
    require(locus < length_, "locus " + std::to_string(locus) + " out of range for length " + std::to_string(length_));
    return (*this)[locus];
}

void Genome::set(std::size_t locus, bool value) noexcept
{
    auto bit = std::uint64_t{1} << (locus & 63);
    if (value) {
        words_[locus >> 6] |= bit;
    } else {
        words_[locus >> 6] &= ~bit;
    }
}

std::size_t Genome::count() const noexcept
{
    std::size_t n = 0;
    for (auto w : words_) {
        n += static_cast<std::size_t>(std::popcount(w));
    }
    return n;
}

Genome Genome::complement() const
{
    Genome g(*this);
    for (auto& w : g.words_) {
        w = ~w;
    }
    if (!g.words_.empty()) {
        g.words_.back() &= g.tail_mask();
    }
    return g;
}

std::uint64_t Genome::tail_mask() const noexcept
{
    auto rem = length_ & 63;
    return rem == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << rem) - 1;
}

std::string Genome::to_string() const
{
    std::string s(length_, '0');
    for (std::size_t i = 0; i < length_; ++i) {
        if ((*this)[i]) {
            s[i] = '1';
        }
    }
    return s;
}

Population Population::uniform(std::size_t size, std::size_t length, Rng& rng)
{
    Population p;
    p.members.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
        p.members.push_back(Genome::random(length, rng));
    }
    return p;
}

void Population::validate() const
{
    require(!members.empty(), "population is empty");
    require(members.size() % 2 == 0, "population size must be even");
    auto length = members.front().size();
    for (const auto& g : members) {
        require(g.size() == length, "population members differ in length");
    }
}

} // namespace uga
