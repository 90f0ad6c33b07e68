#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "uga/sga.hpp"

namespace uga {

void GAConfig::validate() const
{
    require(population_size > 0 && population_size % 2 == 0, "population_size must be a positive even integer");
    require(mutation_rate >= 0.0 && mutation_rate <= 1.0, "mutation_rate must lie in [0, 1]");
    require(crossover_probability >= 0.0 && crossover_probability <= 1.0,
            "crossover_probability must lie in [0, 1]");
}

void sigma_scale_into(std::span<const double> raw, std::vector<double>& out)
{
    require(!raw.empty(), "sigma_scale needs at least one fitness value");
    out.resize(raw.size());

    auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
    require(std::isfinite(*lo) && std::isfinite(*hi), "fitness values must be finite");
    // Equality is tested directly: the computed sd of identical values can
    // come out as a tiny non-zero number.
    if (*lo == *hi) {
        std::fill(out.begin(), out.end(), 1.0);
        return;
    }

    const auto n = static_cast<double>(raw.size());
    const double mean = std::accumulate(raw.begin(), raw.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : raw) {
        ss += (x - mean) * (x - mean);
    }
    const double sd = std::sqrt(ss / n);
    if (sd == 0.0) {
        std::fill(out.begin(), out.end(), 1.0);
        return;
    }
    for (std::size_t i = 0; i < raw.size(); ++i) {
        out[i] = std::max(0.0, 1.0 + (raw[i] - mean) / sd);
    }
}

std::vector<double> sigma_scale(std::span<const double> raw)
{
    std::vector<double> out;
    sigma_scale_into(raw, out);
    return out;
}

void sus_select_into(std::span<const double> scaled, std::size_t count, Rng& rng, std::vector<std::size_t>& out)
{
    require(count >= 1, "sus_select needs count >= 1");
    require(!scaled.empty(), "sus_select needs at least one weight");
    double total = 0.0;
    for (double w : scaled) {
        require(w >= 0.0 && std::isfinite(w), "scaled fitness must be finite and non-negative");
        total += w;
    }
    require(total > 0.0, "scaled fitness is all zero; cannot normalise");

    out.clear();
    out.reserve(count);
    const double per_unit = static_cast<double>(count) / total;
    const double start = rng.uniform();
    double cumulative = 0.0;
    std::size_t k = 0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < scaled.size() && k < count; ++i) {
        if (scaled[i] == 0.0) {
            continue;
        }
        last_positive = i;
        cumulative += scaled[i] * per_unit;
        while (k < count && start + static_cast<double>(k) < cumulative) {
            out.push_back(i);
            ++k;
        }
    }
    // Rounding can leave the final cumulative a hair under `count`.
    while (out.size() < count) {
        out.push_back(last_positive);
    }
}

std::vector<std::size_t> sus_select(std::span<const double> scaled, std::size_t count, Rng& rng)
{
    std::vector<std::size_t> out;
    sus_select_into(scaled, count, rng, out);
    return out;
}

namespace {

void shape_like(Genome& g, std::size_t length)
{
    if (g.size() != length) {
        g = Genome(length);
    }
}

} // namespace

std::pair<Genome, Genome> apply_crossover_mask(const Genome& x, const Genome& y, const Genome& mask)
{
    require(x.size() == y.size() && x.size() == mask.size(), "crossover operands differ in length");
    Genome a(x.size());
    Genome b(x.size());
    auto xw = x.words();
    auto yw = y.words();
    auto mw = mask.words();
    auto aw = a.words();
    auto bw = b.words();
    for (std::size_t w = 0; w < xw.size(); ++w) {
        aw[w] = (xw[w] & mw[w]) | (yw[w] & ~mw[w]);
        bw[w] = (yw[w] & mw[w]) | (xw[w] & ~mw[w]);
    }
    return {std::move(a), std::move(b)};
}

void uniform_crossover_into(const Genome& x, const Genome& y, Rng& rng, Genome& child1, Genome& child2)
{
    require(x.size() == y.size(), "crossover parents differ in length");
    shape_like(child1, x.size());
    shape_like(child2, x.size());
    auto xw = x.words();
    auto yw = y.words();
    auto aw = child1.words();
    auto bw = child2.words();
    // Bits beyond the length are zero in both parents, so children stay clean
    // whatever the mask holds there.
    for (std::size_t w = 0; w < xw.size(); ++w) {
        const std::uint64_t m = rng.bits();
        aw[w] = (xw[w] & m) | (yw[w] & ~m);
        bw[w] = (yw[w] & m) | (xw[w] & ~m);
    }
}

std::pair<Genome, Genome> uniform_crossover(const Genome& x, const Genome& y, Rng& rng)
{
    Genome a;
    Genome b;
    uniform_crossover_into(x, y, rng, a, b);
    return {std::move(a), std::move(b)};
}

void mutate_all(std::span<Genome> genomes, double rate, Rng& rng)
{
    require(rate >= 0.0 && rate <= 1.0, "mutation rate must lie in [0, 1]");
    if (rate == 0.0 || genomes.empty()) {
        return;
    }
    if (rate == 1.0) {
        for (auto& g : genomes) {
            g = g.complement();
        }
        return;
    }

    const std::size_t length = genomes.front().size();
    for (const auto& g : genomes) {
        require(g.size() == length, "genomes differ in length");
    }
    const auto total = static_cast<std::uint64_t>(genomes.size()) * length;
    if (total == 0) {
        return;
    }

    const double log_keep = std::log1p(-rate);
    auto gap = [&]() -> std::uint64_t {
        double skip = std::floor(std::log(rng.uniform_open_low()) / log_keep);
        if (!(skip < static_cast<double>(total))) {
            return total;
        }
        return static_cast<std::uint64_t>(skip);
    };

    std::uint64_t pos = gap();
    while (pos < total) {
        genomes[pos / length].flip(pos % length);
        const auto step = gap();
        if (step >= total - pos) {
            break;
        }
        pos += step + 1;
    }
}

Genome mutate(const Genome& g, double rate, Rng& rng)
{
    Genome out(g);
    mutate_all(std::span<Genome>(&out, 1), rate, rng);
    return out;
}

void recombine(const Population& pool, std::span<const std::size_t> mating_order, double crossover_probability,
               Rng& rng, std::span<Genome> children)
{
    require(mating_order.size() % 2 == 0, "mating order must pair every parent");
    require(children.size() == mating_order.size(), "one child slot per selected parent");
    const bool always = crossover_probability >= 1.0;
    const bool never = crossover_probability <= 0.0;
    for (std::size_t k = 0; k + 1 < mating_order.size(); k += 2) {
        const Genome& x = pool.members.at(mating_order[k]);
        const Genome& y = pool.members.at(mating_order[k + 1]);
        const bool cross = always || (!never && rng.bernoulli(crossover_probability));
        if (cross) {
            uniform_crossover_into(x, y, rng, children[k], children[k + 1]);
        } else {
            children[k] = x;
            children[k + 1] = y;
        }
    }
}

// --- traces ------------------------------------------------------------------

void OneFrequencyTrace::add(const Population& p)
{
    require(p.size() == population_size_ && p.span() == span_, "population shape does not match the trace");
    generations_.push_back(p.generation);
    auto counts = one_counts(p);
    counts_.insert(counts_.end(), counts.begin(), counts.end());
}

void OneFrequencyTrace::add_row(std::uint64_t generation, std::vector<std::uint32_t> counts)
{
    require(counts.size() == span_, "trace row has the wrong number of loci");
    generations_.push_back(generation);
    counts_.insert(counts_.end(), counts.begin(), counts.end());
}

bool RecordSchedule::records(std::uint64_t generation, std::uint64_t final_generation) const
{
    if (generation == 0 || generation == final_generation) {
        return true;
    }
    if (!explicit_generations.empty()) {
        return std::find(explicit_generations.begin(), explicit_generations.end(), generation) !=
               explicit_generations.end();
    }
    return stride != 0 && generation % stride == 0;
}

RecordSchedule RecordSchedule::default_for_span(std::size_t span)
{
    RecordSchedule s;
    s.stride = span <= 8 ? 1 : 10;
    return s;
}

} // namespace uga
