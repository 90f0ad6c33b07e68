#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "uga/error.hpp"
#include "uga/genome.hpp"
#include "uga/random.hpp"
#include "uga/schema.hpp"

namespace uga {

/// Parameters of the uniform-crossover SGA. Defaults are the reference
/// configuration: N = 1500, per-bit mutation 0.003, crossover always applied.
struct GAConfig {
    std::size_t population_size = 1500;
    double mutation_rate = 0.003;
    double crossover_probability = 1.0;
    std::uint64_t generations = 200;
    std::uint64_t seed = 0;

    void validate() const;
    friend bool operator==(const GAConfig&, const GAConfig&) = default;
};

/// A stochastic fitness oracle over bitstrings of a fixed span.
template <typename F>
concept StochasticFitness = requires(const F& f, const Genome& g, Rng& rng) {
    { f.span() } -> std::convertible_to<std::size_t>;
    { f.query(g, rng) } -> std::convertible_to<double>;
};

/// Forwards queries to another fitness function and counts them.
template <StochasticFitness F>
class CountingFitness {
public:
    explicit CountingFitness(const F& inner) : inner_(&inner) { }

    std::size_t span() const { return inner_->span(); }
    double query(const Genome& g, Rng& rng) const
    {
        ++queries_;
        return inner_->query(g, rng);
    }
    std::uint64_t queries() const noexcept { return queries_; }

private:
    const F* inner_;
    mutable std::uint64_t queries_ = 0;
};

// --- operators ---------------------------------------------------------------

/// Sigma scaling: max(0, 1 + (f - mean) / sd) with the population standard
/// deviation; all ones when every value is equal.
std::vector<double> sigma_scale(std::span<const double> raw);
void sigma_scale_into(std::span<const double> raw, std::vector<double>& out);

/// Stochastic universal sampling: one spin, `count` equally spaced pointers.
/// Member i is returned floor(e_i) or ceil(e_i) times, e_i = count * w_i / sum(w).
/// Indices come out grouped in ascending order.
std::vector<std::size_t> sus_select(std::span<const double> scaled, std::size_t count, Rng& rng);
void sus_select_into(std::span<const double> scaled, std::size_t count, Rng& rng, std::vector<std::size_t>& out);

/// Child 1 takes x where the mask bit is 1 and y elsewhere; child 2 is the
/// opposite.
std::pair<Genome, Genome> apply_crossover_mask(const Genome& x, const Genome& y, const Genome& mask);
std::pair<Genome, Genome> uniform_crossover(const Genome& x, const Genome& y, Rng& rng);
/// Writes into existing children (resized if their length differs).
void uniform_crossover_into(const Genome& x, const Genome& y, Rng& rng, Genome& child1, Genome& child2);

Genome mutate(const Genome& g, double rate, Rng& rng);

/// Flips each bit of every genome independently with probability `rate`.
/// Draws geometric gaps between flips over the concatenated bits, which has
/// the same distribution as per-bit coin tosses.
void mutate_all(std::span<Genome> genomes, double rate, Rng& rng);

/// Crossover phase. Parents `pool.members[mating_order[2k]]` and
/// `[2k + 1]` produce children 2k and 2k + 1; with probability
/// 1 - crossover_probability the pair is copied unchanged.
void recombine(const Population& pool, std::span<const std::size_t> mating_order, double crossover_probability,
               Rng& rng, std::span<Genome> children);

// --- generational loop -------------------------------------------------------

struct GenerationWorkspace {
    std::vector<double> raw;
    std::vector<double> scaled;
    std::vector<std::size_t> parents;
};

/// One generation: evaluate all members once, sigma-scale, SUS-select N
/// parents, shuffle them, pair neighbours, cross, mutate.
template <StochasticFitness F>
void step_generation_into(const Population& current, Population& next, const F& f, const GAConfig& cfg, Rng& rng,
                          GenerationWorkspace& ws)
{
    const auto n = current.size();
    require(n > 0, "cannot step an empty population");
    require(current.span() == static_cast<std::size_t>(f.span()), "genome length does not match the fitness span");

    ws.raw.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        ws.raw[i] = f.query(current.members[i], rng);
    }
    sigma_scale_into(ws.raw, ws.scaled);
    sus_select_into(ws.scaled, n, rng, ws.parents);
    rng.shuffle(ws.parents.begin(), ws.parents.end());

    next.members.resize(n);
    recombine(current, ws.parents, cfg.crossover_probability, rng, next.members);
    mutate_all(next.members, cfg.mutation_rate, rng);
    next.generation = current.generation + 1;
}

template <StochasticFitness F>
Population step_generation(const Population& current, const F& f, const GAConfig& cfg, Rng& rng)
{
    cfg.validate();
    current.validate();
    GenerationWorkspace ws;
    Population next;
    step_generation_into(current, next, f, cfg, rng, ws);
    return next;
}

// --- whole runs --------------------------------------------------------------

/// Per-generation one-counts of every locus for the recorded generations.
class OneFrequencyTrace {
public:
    OneFrequencyTrace() = default;
    OneFrequencyTrace(std::size_t population_size, std::size_t span)
        : population_size_(population_size), span_(span) { }

    void add(const Population& p);
    /// Appends an already-counted row; used when reading traces back.
    void add_row(std::uint64_t generation, std::vector<std::uint32_t> counts);

    std::size_t rows() const noexcept { return generations_.size(); }
    std::size_t span() const noexcept { return span_; }
    std::size_t population_size() const noexcept { return population_size_; }
    std::uint64_t generation(std::size_t row) const { return generations_.at(row); }
    std::span<const std::uint64_t> generations() const noexcept { return generations_; }

    std::uint32_t one_count(std::size_t row, std::size_t locus) const { return counts_.at(row * span_ + locus); }
    double one_frequency(std::size_t row, std::size_t locus) const
    {
        return static_cast<double>(one_count(row, locus)) / static_cast<double>(population_size_);
    }
    double zero_frequency(std::size_t row, std::size_t locus) const { return 1.0 - one_frequency(row, locus); }
    std::span<const std::uint32_t> row_counts(std::size_t row) const
    {
        return std::span<const std::uint32_t>(counts_).subspan(row * span_, span_);
    }

    friend bool operator==(const OneFrequencyTrace&, const OneFrequencyTrace&) = default;

private:
    std::size_t population_size_ = 0;
    std::size_t span_ = 0;
    std::vector<std::uint64_t> generations_;
    std::vector<std::uint32_t> counts_;
};

/// Which generations a run writes into its trace. Generation 0 and the final
/// generation are always recorded.
struct RecordSchedule {
    std::uint64_t stride = 1;
    std::vector<std::uint64_t> explicit_generations;

    bool records(std::uint64_t generation, std::uint64_t final_generation) const;

    /// Every generation for spans up to 8, every 10th beyond.
    static RecordSchedule default_for_span(std::size_t span);
};

struct RunOptions {
    RecordSchedule schedule;
    /// Dominant-schema statistics are taken on this partition at every
    /// recorded generation when set.
    std::optional<SchemaPartition> schema;
    /// Called with the population of every generation, 0 included.
    std::function<void(const Population&)> observer;
};

struct SchemaRecord {
    std::uint64_t generation = 0;
    DominantSchema dominant;
    friend bool operator==(const SchemaRecord&, const SchemaRecord&) = default;
};

struct RunTrace {
    std::uint64_t seed = 0;
    OneFrequencyTrace frequencies;
    std::vector<SchemaRecord> schema_records;
    std::uint64_t queries = 0;
    Population final_population;

    friend bool operator==(const RunTrace&, const RunTrace&) = default;
};

/// Runs the SGA from a uniformly random initial population for
/// `cfg.generations` generations. A pure function of (f, cfg, options).
template <StochasticFitness F>
RunTrace run(const F& f, const GAConfig& cfg, const RunOptions& options = {})
{
    cfg.validate();
    const std::size_t span = f.span();
    if (options.schema) {
        options.schema->validate_for(span);
    }

    Rng rng(cfg.seed);
    CountingFitness<F> counted(f);
    RunTrace trace;
    trace.seed = cfg.seed;
    trace.frequencies = OneFrequencyTrace(cfg.population_size, span);

    auto observe = [&](const Population& p) {
        if (options.schedule.records(p.generation, cfg.generations)) {
            trace.frequencies.add(p);
            if (options.schema) {
                trace.schema_records.push_back({p.generation, dominant_schema(p, *options.schema)});
            }
        }
        if (options.observer) {
            options.observer(p);
        }
    };

    Population current = Population::uniform(cfg.population_size, span, rng);
    Population next;
    GenerationWorkspace ws;
    observe(current);
    for (std::uint64_t t = 0; t < cfg.generations; ++t) {
        step_generation_into(current, next, counted, cfg, rng, ws);
        std::swap(current, next);
        observe(current);
    }
    trace.queries = counted.queries();
    trace.final_population = std::move(current);
    return trace;
}

} // namespace uga
