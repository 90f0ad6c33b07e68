#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "uga/pivotal.hpp"
#include "uga/sga.hpp"

namespace uga {

/// Everything needed to reproduce a batch of replicate runs.
struct ExperimentConfig {
    explicit ExperimentConfig(PivotalFunction f) : function(std::move(f)) { }

    PivotalFunction function;
    GAConfig ga;
    std::size_t replicates = 300;
    RecordSchedule schedule;
    std::uint64_t seed_base = 0;
    /// Worker threads; 0 picks the hardware concurrency.
    std::size_t threads = 0;

    void validate() const;
};

/// Reference experiment on the basic type 1 function (order 3, delta 0.18,
/// sigma 1): 200 generations.
ExperimentConfig experiment1_config(std::size_t replicates = 300, std::uint64_t seed_base = 1);
/// Reference experiment on the basic type 2 function (order 4, delta 0.25,
/// sigma 1): 1000 generations.
ExperimentConfig experiment2_config(std::size_t replicates = 300, std::uint64_t seed_base = 2);

// Config files are JSON with sections "function", "ga" and "experiment".
// Loci in files are 1-based; in memory they are 0-based.

nlohmann::json function_to_json(const PivotalFunction& f);
PivotalFunction function_from_json(const nlohmann::json& j);

nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);

ExperimentConfig load_config(const std::filesystem::path& path);
void save_config(const ExperimentConfig& cfg, const std::filesystem::path& path);

} // namespace uga
