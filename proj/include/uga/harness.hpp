#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "uga/config.hpp"
#include "uga/sga.hpp"
#include "uga/stats.hpp"
#include "uga/trace_io.hpp"

namespace uga {

/// A replicate failed; carries the seed needed to reproduce it.
class ExperimentError : public std::runtime_error {
public:
    ExperimentError(std::size_t replicate, std::uint64_t seed, const std::string& what);
    std::size_t replicate() const noexcept { return replicate_; }
    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::size_t replicate_;
    std::uint64_t seed_;
};

/// What one replicate contributes to a summary.
struct ReplicateOutcome {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    OneFrequencyTrace frequencies;
    /// Dominant schema of the pivotal-loci partition at the final generation.
    DominantSchema dominant;
    std::uint64_t queries = 0;
};

struct TrajectoryQuantiles {
    std::uint64_t generation = 0;
    /// 1-based.
    std::size_t locus = 0;
    double q05 = 0.0;
    double q25 = 0.0;
    double q50 = 0.0;
    double q75 = 0.0;
    double q95 = 0.0;
};

inline constexpr double kSignificanceFailureRate = 0.005;

struct ExperimentSummary {
    std::size_t replicates = 0;
    std::size_t population_size = 0;
    std::size_t span = 0;
    std::uint64_t generations = 0;

    /// Per locus (0-based index): runs whose final one-frequency is outside
    /// [0.1, 0.9].
    std::vector<std::size_t> fixation_counts;
    /// Per locus: runs whose final one-frequency is inside [0.07, 0.93].
    std::vector<std::size_t> inside_wide_band_counts;
    /// Per locus mean of the final one-frequency.
    std::vector<double> mean_final_frequency;

    double dominant_fraction_mean = 0.0;
    /// Absent when there is a single replicate.
    std::optional<double> dominant_fraction_se;
    /// Runs per dominant schema string.
    std::map<std::string, std::size_t> dominant_schema_counts;
    /// Runs whose dominant schema is rewarded by the function: the pivotal
    /// values or their complement for type 1, odd parity for type 2.
    std::size_t rewarded_schema_runs = 0;

    std::vector<TrajectoryQuantiles> trajectory_quantiles;
    std::uint64_t total_queries = 0;
    /// (1 - 0.005)^replicates.
    double significance_bound = 0.0;
};

/// Folds replicate outcomes into a summary. Shards of replicates can be
/// accumulated separately and merged.
class SummaryAccumulator {
public:
    explicit SummaryAccumulator(const PivotalFunction& f);

    void add(const ReplicateOutcome& outcome);
    void merge(const SummaryAccumulator& other);
    ExperimentSummary finish() const;

private:
    PivotalFunction function_;
    std::size_t replicates_ = 0;
    std::size_t population_size_ = 0;
    std::size_t span_ = 0;
    std::uint64_t generations_ = 0;
    std::vector<std::size_t> fixation_counts_;
    std::vector<std::size_t> wide_band_counts_;
    std::vector<MeanAccumulator> final_frequency_;
    MeanAccumulator dominant_;
    std::map<std::string, std::size_t> schema_counts_;
    std::size_t rewarded_ = 0;
    std::uint64_t queries_ = 0;
    std::vector<std::uint64_t> trajectory_generations_;
    /// [row][locus] -> one-frequency of each replicate seen.
    std::vector<std::vector<std::vector<double>>> trajectories_;
};

/// True when `schema` (over the pivotal loci, in order) is rewarded by f.
bool is_rewarded_schema(const PivotalFunction& f, const std::string& schema);

ReplicateOutcome run_replicate(const ExperimentConfig& cfg, std::size_t index);

struct ExperimentResult {
    ExperimentSummary summary;
    std::vector<ReplicateOutcome> outcomes;
};

/// Runs every replicate (concurrently when cfg.threads != 1) and reduces
/// them in replicate order, so the result does not depend on the thread
/// count.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

ExperimentSummary summarize(const PivotalFunction& f, std::span<const ReplicateOutcome> outcomes);

/// Writes traces.csv, summary.json and config.json into `dir`.
void persist_experiment(const ExperimentConfig& cfg, const ExperimentResult& result, const std::filesystem::path& dir);

nlohmann::json summary_to_json(const ExperimentSummary& s);
std::vector<IndexedTrace> traces_of(std::span<const ReplicateOutcome> outcomes);

} // namespace uga
