#include "uga/pivotal.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "uga/error.hpp"

namespace uga {

namespace {

constexpr std::size_t kMaxOrder = 63;

void check_loci(std::span<const std::size_t> loci, std::size_t span)
{
    for (std::size_t j = 0; j < loci.size(); ++j) {
        require(loci[j] < span, "pivotal locus " + std::to_string(loci[j]) + " outside span " + std::to_string(span));
        require(j == 0 || loci[j - 1] < loci[j], "pivotal loci must be strictly ascending");
    }
}

std::vector<std::size_t> leading_loci(std::size_t order)
{
    std::vector<std::size_t> loci(order);
    std::iota(loci.begin(), loci.end(), std::size_t{0});
    return loci;
}

} // namespace

Type1Descriptor::Type1Descriptor(std::size_t order, double sigma, double delta, std::size_t span,
                                 std::vector<std::size_t> loci, std::vector<bool> values)
    : sigma_(sigma), delta_(delta), span_(span), loci_(std::move(loci)), values_(std::move(values))
{
    require(order >= 2, "type 1 order must be at least 2 (order 1 divides by 2^o - 2 = 0)");
    require(order <= kMaxOrder, "order too large");
    require(loci_.size() == order && values_.size() == order, "type 1 needs exactly `order` loci and values");
    require(span_ > order, "span must exceed the order");
    require(sigma_ >= 0.0 && std::isfinite(sigma_), "sigma must be finite and non-negative");
    require(delta_ >= 0.0 && std::isfinite(delta_), "delta must be finite and non-negative");
    check_loci(loci_, span_);
    for (std::size_t j = 0; j < order; ++j) {
        if (values_[j]) {
            value_pattern_ |= std::uint64_t{1} << j;
        }
    }
    off_mean_ = -2.0 * delta_ / (std::ldexp(1.0, static_cast<int>(order)) - 2.0);
}

Type2Descriptor::Type2Descriptor(std::size_t order, double sigma, double delta, std::size_t span,
                                 std::vector<std::size_t> loci)
    : sigma_(sigma), delta_(delta), span_(span), loci_(std::move(loci))
{
    require(order >= 2 && order % 2 == 0, "type 2 order must be a positive even integer");
    require(order <= kMaxOrder, "order too large");
    require(loci_.size() == order, "type 2 needs exactly `order` loci");
    require(span_ > order, "span must exceed the order");
    require(sigma_ >= 0.0 && std::isfinite(sigma_), "sigma must be finite and non-negative");
    require(delta_ >= 0.0 && std::isfinite(delta_), "delta must be finite and non-negative");
    check_loci(loci_, span_);
}

std::uint64_t pivotal_pattern(const Genome& g, std::span<const std::size_t> loci) noexcept
{
    std::uint64_t pattern = 0;
    for (std::size_t j = 0; j < loci.size(); ++j) {
        pattern |= static_cast<std::uint64_t>(g[loci[j]]) << j;
    }
    return pattern;
}

double conditional_mean(const Type1Descriptor& d, std::uint64_t pattern) noexcept
{
    const std::uint64_t full = (std::uint64_t{1} << d.order()) - 1;
    const std::uint64_t v = d.value_pattern();
    return (pattern == v || pattern == (~v & full)) ? d.delta() : d.off_pattern_mean();
}

double conditional_mean(const Type2Descriptor& d, std::uint64_t pattern) noexcept
{
    return (std::popcount(pattern) & 1) != 0 ? d.delta() : -d.delta();
}

double query_type1(const Type1Descriptor& d, const Genome& g, Rng& rng)
{
    require(g.size() == d.span(), "genome length does not match the span");
    return rng.normal(conditional_mean(d, pivotal_pattern(g, d.loci())), d.sigma());
}

double query_type2(const Type2Descriptor& d, const Genome& g, Rng& rng)
{
    require(g.size() == d.span(), "genome length does not match the span");
    return rng.normal(conditional_mean(d, pivotal_pattern(g, d.loci())), d.sigma());
}

Type1Descriptor basic_form_type1(const Type1Descriptor& d)
{
    return Type1Descriptor(d.order(), d.sigma(), d.delta(), d.order() + 1, leading_loci(d.order()),
                           std::vector<bool>(d.order(), true));
}

Type2Descriptor basic_form_type2(const Type2Descriptor& d)
{
    return Type2Descriptor(d.order(), d.sigma(), d.delta(), d.order() + 1, leading_loci(d.order()));
}

// --- PivotalFunction ---------------------------------------------------------

std::size_t PivotalFunction::span() const
{
    return std::visit([](const auto& d) { return d.span(); }, descriptor_);
}

std::size_t PivotalFunction::order() const
{
    return std::visit([](const auto& d) { return d.order(); }, descriptor_);
}

double PivotalFunction::sigma() const
{
    return std::visit([](const auto& d) { return d.sigma(); }, descriptor_);
}

double PivotalFunction::delta() const
{
    return std::visit([](const auto& d) { return d.delta(); }, descriptor_);
}

std::span<const std::size_t> PivotalFunction::loci() const
{
    return std::visit([](const auto& d) { return d.loci(); }, descriptor_);
}

double PivotalFunction::query(const Genome& g, Rng& rng) const
{
    if (const auto* d1 = std::get_if<Type1Descriptor>(&descriptor_)) {
        return query_type1(*d1, g, rng);
    }
    return query_type2(std::get<Type2Descriptor>(descriptor_), g, rng);
}

double PivotalFunction::mean_for_pattern(std::uint64_t pattern) const
{
    return std::visit([pattern](const auto& d) { return conditional_mean(d, pattern); }, descriptor_);
}

double PivotalFunction::mean(const Genome& g) const
{
    require(g.size() == span(), "genome length does not match the span");
    return mean_for_pattern(pivotal_pattern(g, loci()));
}

PivotalFunction PivotalFunction::basic_form() const
{
    if (const auto* d1 = std::get_if<Type1Descriptor>(&descriptor_)) {
        return PivotalFunction(basic_form_type1(*d1));
    }
    return PivotalFunction(basic_form_type2(std::get<Type2Descriptor>(descriptor_)));
}

// --- marginals ---------------------------------------------------------------

std::string MarginalTable::assignment(std::size_t row) const
{
    const auto k = combo.size();
    std::string s(k, '0');
    for (std::size_t j = 0; j < k; ++j) {
        if ((row >> (k - 1 - j)) & 1U) {
            s[j] = '1';
        }
    }
    return s;
}

double MarginalTable::entry(std::string_view bits) const
{
    require(bits.size() == combo.size(), "assignment length does not match the combination");
    std::size_t row = 0;
    for (char c : bits) {
        require(c == '0' || c == '1', "assignment may only contain '0' and '1'");
        row = (row << 1) | static_cast<std::size_t>(c == '1');
    }
    return entries.at(row);
}

MarginalTable exact_marginal(const PivotalFunction& f, std::span<const std::size_t> combo)
{
    require(!combo.empty(), "combination must be non-empty");
    require(combo.size() <= 24, "combination too large for an exact table");
    const auto span = f.span();
    for (std::size_t j = 0; j < combo.size(); ++j) {
        require(combo[j] < span, "combination locus " + std::to_string(combo[j]) + " outside span");
        for (std::size_t i = 0; i < j; ++i) {
            require(combo[i] != combo[j], "combination has duplicate loci");
        }
    }

    const auto loci = f.loci();
    const auto order = loci.size();
    // For each pivotal slot, which combo position (if any) fixes it.
    std::vector<std::ptrdiff_t> fixed_by(order, -1);
    std::vector<std::size_t> free_slots;
    for (std::size_t s = 0; s < order; ++s) {
        auto it = std::find(combo.begin(), combo.end(), loci[s]);
        if (it != combo.end()) {
            fixed_by[s] = it - combo.begin();
        } else {
            free_slots.push_back(s);
        }
    }

    const auto k = combo.size();
    const std::uint64_t free_assignments = std::uint64_t{1} << free_slots.size();
    MarginalTable table;
    table.combo.assign(combo.begin(), combo.end());
    table.entries.resize(std::size_t{1} << k);
    for (std::size_t row = 0; row < table.entries.size(); ++row) {
        std::uint64_t base = 0;
        for (std::size_t s = 0; s < order; ++s) {
            if (fixed_by[s] >= 0) {
                auto j = static_cast<std::size_t>(fixed_by[s]);
                base |= static_cast<std::uint64_t>((row >> (k - 1 - j)) & 1U) << s;
            }
        }
        double sum = 0.0;
        for (std::uint64_t a = 0; a < free_assignments; ++a) {
            std::uint64_t pattern = base;
            for (std::size_t b = 0; b < free_slots.size(); ++b) {
                pattern |= ((a >> b) & 1U) << free_slots[b];
            }
            sum += f.mean_for_pattern(pattern);
        }
        table.entries[row] = sum / static_cast<double>(free_assignments);
    }
    return table;
}

PivotalFunction random_pivotal(int type, std::size_t order, double sigma, double delta, std::size_t span, Rng& rng)
{
    require(type == 1 || type == 2, "pivotal function type must be 1 or 2");
    require(order < span, "span must exceed the order");
    // Partial Fisher-Yates over 0..span-1 for the loci.
    std::vector<std::size_t> pool(span);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < order; ++i) {
        auto j = i + static_cast<std::size_t>(rng.below(span - i));
        std::swap(pool[i], pool[j]);
    }
    std::vector<std::size_t> loci(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(order));
    std::sort(loci.begin(), loci.end());
    if (type == 1) {
        std::vector<bool> values(order);
        for (std::size_t j = 0; j < order; ++j) {
            values[j] = rng.coin();
        }
        return PivotalFunction(Type1Descriptor(order, sigma, delta, span, std::move(loci), std::move(values)));
    }
    return PivotalFunction(Type2Descriptor(order, sigma, delta, span, std::move(loci)));
}

} // namespace uga
