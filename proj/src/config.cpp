#include "uga/config.hpp"

#include <fstream>

#include "uga/error.hpp"

namespace uga {

using nlohmann::json;

void ExperimentConfig::validate() const
{
    ga.validate();
    require(replicates >= 1, "replicates must be at least 1");
}

ExperimentConfig experiment1_config(std::size_t replicates, std::uint64_t seed_base)
{
    Type1Descriptor basic(3, 1.0, 0.18, 4, {0, 1, 2}, {true, true, true});
    ExperimentConfig cfg{PivotalFunction(basic)};
    cfg.ga.generations = 200;
    cfg.replicates = replicates;
    cfg.schedule = RecordSchedule::default_for_span(4);
    cfg.seed_base = seed_base;
    return cfg;
}

ExperimentConfig experiment2_config(std::size_t replicates, std::uint64_t seed_base)
{
    Type2Descriptor basic(4, 1.0, 0.25, 5, {0, 1, 2, 3});
    ExperimentConfig cfg{PivotalFunction(basic)};
    cfg.ga.generations = 1000;
    cfg.replicates = replicates;
    cfg.schedule = RecordSchedule::default_for_span(5);
    cfg.seed_base = seed_base;
    return cfg;
}

json function_to_json(const PivotalFunction& f)
{
    json j;
    j["type"] = f.type();
    j["o"] = f.order();
    j["sigma"] = f.sigma();
    j["delta"] = f.delta();
    j["span"] = f.span();
    json loci = json::array();
    for (auto locus : f.loci()) {
        loci.push_back(locus + 1);
    }
    j["loci"] = loci;
    if (const auto* d1 = std::get_if<Type1Descriptor>(&f.descriptor())) {
        json values = json::array();
        for (bool v : d1->values()) {
            values.push_back(v ? 1 : 0);
        }
        j["values"] = values;
    }
    return j;
}

PivotalFunction function_from_json(const json& j)
{
    try {
        const int type = j.at("type").get<int>();
        const auto order = j.at("o").get<std::size_t>();
        const double sigma = j.at("sigma").get<double>();
        const double delta = j.at("delta").get<double>();
        const auto span = j.at("span").get<std::size_t>();
        std::vector<std::size_t> loci;
        for (const auto& v : j.at("loci")) {
            const auto one_based = v.get<std::size_t>();
            require(one_based >= 1, "loci in config files are 1-based");
            loci.push_back(one_based - 1);
        }
        if (type == 1) {
            std::vector<bool> values;
            for (const auto& v : j.at("values")) {
                const int bit = v.get<int>();
                require(bit == 0 || bit == 1, "pivotal values must be 0 or 1");
                values.push_back(bit == 1);
            }
            return PivotalFunction(Type1Descriptor(order, sigma, delta, span, std::move(loci), std::move(values)));
        }
        require(type == 2, "function type must be 1 or 2");
        require(!j.contains("values"), "type 2 functions take no pivotal values");
        return PivotalFunction(Type2Descriptor(order, sigma, delta, span, std::move(loci)));
    } catch (const json::exception& e) {
        throw ContractViolation(std::string("bad function section: ") + e.what());
    }
}

json config_to_json(const ExperimentConfig& cfg)
{
    json j;
    j["function"] = function_to_json(cfg.function);
    j["ga"] = {
        {"population_size", cfg.ga.population_size},
        {"mutation_rate", cfg.ga.mutation_rate},
        {"crossover_probability", cfg.ga.crossover_probability},
        {"generations", cfg.ga.generations},
    };
    j["experiment"] = {
        {"replicates", cfg.replicates},
        {"seed_base", cfg.seed_base},
        {"record_stride", cfg.schedule.stride},
    };
    if (!cfg.schedule.explicit_generations.empty()) {
        j["experiment"]["record_generations"] = cfg.schedule.explicit_generations;
    }
    return j;
}

ExperimentConfig config_from_json(const json& j)
{
    try {
        ExperimentConfig cfg{function_from_json(j.at("function"))};
        cfg.schedule = RecordSchedule::default_for_span(cfg.function.span());
        if (j.contains("ga")) {
            const auto& ga = j.at("ga");
            cfg.ga.population_size = ga.value("population_size", cfg.ga.population_size);
            cfg.ga.mutation_rate = ga.value("mutation_rate", cfg.ga.mutation_rate);
            cfg.ga.crossover_probability = ga.value("crossover_probability", cfg.ga.crossover_probability);
            cfg.ga.generations = ga.value("generations", cfg.ga.generations);
        }
        if (j.contains("experiment")) {
            const auto& ex = j.at("experiment");
            cfg.replicates = ex.value("replicates", cfg.replicates);
            cfg.seed_base = ex.value("seed_base", cfg.seed_base);
            cfg.schedule.stride = ex.value("record_stride", cfg.schedule.stride);
            if (ex.contains("record_generations")) {
                cfg.schedule.explicit_generations = ex.at("record_generations").get<std::vector<std::uint64_t>>();
            }
        }
        cfg.validate();
        return cfg;
    } catch (const json::exception& e) {
        throw ContractViolation(std::string("bad config: ") + e.what());
    }
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config " + path.string());
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ContractViolation("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

void save_config(const ExperimentConfig& cfg, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write config " + path.string());
    }
    out << config_to_json(cfg).dump(2) << '\n';
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

} // namespace uga
