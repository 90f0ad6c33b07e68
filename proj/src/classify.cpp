#include "uga/classify.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <string>

#include "uga/error.hpp"

namespace uga {

SchemaPartition::SchemaPartition(std::vector<std::size_t> positions) : positions_(std::move(positions))
{
    require(!positions_.empty(), "schema partition needs at least one defining position");
    for (std::size_t j = 0; j < positions_.size(); ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            require(positions_[i] != positions_[j], "schema partition positions must be distinct");
        }
    }
}

void SchemaPartition::validate_for(std::size_t span) const
{
    for (auto pos : positions_) {
        require(pos < span, "schema position " + std::to_string(pos) + " outside span " + std::to_string(span));
    }
}

SchemaPartition SchemaPartition::leading(std::size_t order)
{
    std::vector<std::size_t> positions(order);
    for (std::size_t i = 0; i < order; ++i) {
        positions[i] = i;
    }
    return SchemaPartition(std::move(positions));
}

std::size_t one_count(const Population& p, std::size_t locus)
{
    require(!p.members.empty(), "population is empty");
    require(locus < p.span(), "locus " + std::to_string(locus) + " out of range");
    std::size_t n = 0;
    for (const auto& g : p.members) {
        n += g[locus] ? 1 : 0;
    }
    return n;
}

double one_frequency(const Population& p, std::size_t locus)
{
    return static_cast<double>(one_count(p, locus)) / static_cast<double>(p.size());
}

double zero_frequency(const Population& p, std::size_t locus)
{
    return static_cast<double>(p.size() - one_count(p, locus)) / static_cast<double>(p.size());
}

std::vector<std::uint32_t> one_counts(const Population& p)
{
    const auto span = p.span();
    std::vector<std::uint32_t> counts(span, 0);
    for (const auto& g : p.members) {
        auto words = g.words();
        for (std::size_t w = 0; w < words.size(); ++w) {
            auto bits = words[w];
            while (bits != 0) {
                auto b = static_cast<std::size_t>(std::countr_zero(bits));
                ++counts[w * 64 + b];
                bits &= bits - 1;
            }
        }
    }
    return counts;
}

DominantSchema dominant_schema(const Population& p, const SchemaPartition& partition)
{
    require(!p.members.empty(), "population is empty");
    partition.validate_for(p.span());
    const auto positions = partition.positions();
    const auto k = positions.size();

    auto key_of = [&](const Genome& g) {
        std::uint64_t key = 0;
        for (std::size_t j = 0; j < k; ++j) {
            key = (key << 1) | static_cast<std::uint64_t>(g[positions[j]]);
        }
        return key;
    };
    auto as_string = [&](const Genome& g) {
        std::string s(k, '0');
        for (std::size_t j = 0; j < k; ++j) {
            if (g[positions[j]]) {
                s[j] = '1';
            }
        }
        return s;
    };

    DominantSchema best;
    if (k <= 20) {
        // Keys read position 0 as the most significant bit, so ascending key
        // order is lexicographic schema order and the first maximum wins ties.
        std::vector<std::size_t> counts(std::size_t{1} << k, 0);
        for (const auto& g : p.members) {
            ++counts[key_of(g)];
        }
        auto it = std::max_element(counts.begin(), counts.end());
        auto key = static_cast<std::uint64_t>(it - counts.begin());
        best.schema.assign(k, '0');
        for (std::size_t j = 0; j < k; ++j) {
            if ((key >> (k - 1 - j)) & 1U) {
                best.schema[j] = '1';
            }
        }
        best.members = *it;
    } else {
        std::map<std::string, std::size_t> counts;
        for (const auto& g : p.members) {
            ++counts[as_string(g)];
        }
        for (const auto& [schema, n] : counts) {
            if (n > best.members) {
                best.schema = schema;
                best.members = n;
            }
        }
    }
    best.fraction = static_cast<double>(best.members) / static_cast<double>(p.size());
    return best;
}

bool FrequencyBand::contains(std::size_t count, std::size_t population_size) const noexcept
{
    // count / N is correctly rounded and any c / N differs from a decimal
    // bound by far more than an ulp, so boundary counts such as 150 / 1500
    // compare equal to 0.1 exactly.
    return contains(static_cast<double>(count) / static_cast<double>(population_size));
}

ClassificationResult classify_population(const Population& p, FrequencyBand band)
{
    require(!p.members.empty(), "population is empty");
    ClassificationResult result;
    result.generation_used = p.generation;
    const auto counts = one_counts(p);
    result.frequencies.reserve(counts.size());
    for (std::size_t locus = 0; locus < counts.size(); ++locus) {
        result.frequencies.push_back(static_cast<double>(counts[locus]) / static_cast<double>(p.size()));
        if (band.contains(counts[locus], p.size())) {
            result.non_pivotal_loci.push_back(locus);
        } else {
            result.pivotal_loci.push_back(locus);
        }
    }
    return result;
}

ClassificationResult classify_loci(const PivotalFunction& f, std::uint64_t generations, GAConfig cfg,
                                   FrequencyBand band)
{
    require(generations >= 1, "classification needs at least one generation");
    cfg.generations = generations;
    RunOptions options;
    options.schedule.stride = 0;
    auto trace = run(f, cfg, options);
    auto result = classify_population(trace.final_population, band);
    result.queries = trace.queries;
    return result;
}

std::size_t count_misclassified(const ClassificationResult& result, const PivotalFunction& f)
{
    const auto loci = f.loci();
    auto is_pivotal = [&](std::size_t locus) { return std::binary_search(loci.begin(), loci.end(), locus); };
    std::size_t wrong = 0;
    for (auto locus : result.pivotal_loci) {
        wrong += is_pivotal(locus) ? 0 : 1;
    }
    for (auto locus : result.non_pivotal_loci) {
        wrong += is_pivotal(locus) ? 1 : 0;
    }
    return wrong;
}

} // namespace uga
