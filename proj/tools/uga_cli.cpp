// Command-line front end: single runs, replicate experiments, locus
// classification, the combinatorial marginal scan and the exact-marginal
// property suite.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "uga/classify.hpp"
#include "uga/config.hpp"
#include "uga/dmt.hpp"
#include "uga/error.hpp"
#include "uga/harness.hpp"
#include "uga/trace_io.hpp"
#include "uga/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOptions {
    std::string config;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> replicates;
    std::optional<std::uint64_t> generations;
    std::string out;
    std::size_t threads = 0;
};

void add_common(CLI::App* cmd, CommonOptions& o)
{
    auto* cfg = cmd->add_option("--config", o.config, "JSON config file");
    auto* preset = cmd->add_option("--preset", o.preset, "built-in config: exp1 or exp2")
                       ->check(CLI::IsMember({"exp1", "exp2"}));
    cfg->excludes(preset);
    cmd->add_option("--seed", o.seed, "seed (seed_base for experiments)");
    cmd->add_option("--replicates", o.replicates, "number of replicate runs");
    cmd->add_option("--generations", o.generations, "override the generation count");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
}

uga::ExperimentConfig resolve(const CommonOptions& o)
{
    uga::ExperimentConfig cfg = [&] {
        if (!o.config.empty()) {
            return uga::load_config(o.config);
        }
        if (o.preset == "exp2") {
            return uga::experiment2_config();
        }
        if (o.preset == "exp1") {
            return uga::experiment1_config();
        }
        throw uga::ContractViolation("one of --config or --preset is required");
    }();
    if (o.seed) {
        cfg.seed_base = *o.seed;
    }
    if (o.replicates) {
        cfg.replicates = *o.replicates;
    }
    if (o.generations) {
        cfg.ga.generations = *o.generations;
    }
    cfg.threads = o.threads;
    cfg.validate();
    return cfg;
}

json schema_json(const uga::DominantSchema& d)
{
    return {{"schema", d.schema}, {"fraction", d.fraction}, {"members", d.members}};
}

json loci_json(const std::vector<std::size_t>& loci)
{
    json a = json::array();
    for (auto l : loci) {
        a.push_back(l + 1);
    }
    return a;
}

int cmd_run(const CommonOptions& o)
{
    auto cfg = resolve(o);
    uga::GAConfig ga = cfg.ga;
    ga.seed = o.seed.value_or(cfg.seed_base);
    uga::RunOptions options;
    options.schedule = cfg.schedule;
    const auto loci = cfg.function.loci();
    options.schema = uga::SchemaPartition(std::vector<std::size_t>(loci.begin(), loci.end()));
    auto trace = uga::run(cfg.function, ga, options);

    json out;
    out["seed"] = ga.seed;
    out["generations"] = ga.generations;
    out["queries"] = trace.queries;
    out["final_one_frequency"] = uga::classify_population(trace.final_population).frequencies;
    out["dominant_schema"] = schema_json(trace.schema_records.back().dominant);
    if (!o.out.empty()) {
        fs::create_directories(o.out);
        const uga::IndexedTrace t{0, trace.frequencies};
        uga::export_traces(std::span(&t, 1), fs::path(o.out) / "trace.csv");
        out["trace"] = (fs::path(o.out) / "trace.csv").string();
    }
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_experiment(const CommonOptions& o, bool with_quantiles)
{
    auto cfg = resolve(o);
    auto result = uga::run_experiment(cfg);
    if (!o.out.empty()) {
        uga::persist_experiment(cfg, result, o.out);
    }
    auto j = uga::summary_to_json(result.summary);
    if (!with_quantiles) {
        j.erase("trajectory_quantiles");
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_classify(const CommonOptions& o)
{
    auto cfg = resolve(o);
    uga::GAConfig ga = cfg.ga;
    ga.seed = o.seed.value_or(cfg.seed_base);
    auto result = uga::classify_loci(cfg.function, cfg.ga.generations, ga);
    json out;
    out["generation_used"] = result.generation_used;
    out["queries"] = result.queries;
    out["pivotal_loci"] = loci_json(result.pivotal_loci);
    out["non_pivotal_loci"] = loci_json(result.non_pivotal_loci);
    out["misclassified"] = uga::count_misclassified(result, cfg.function);
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_dmt(const CommonOptions& o, std::size_t order, std::size_t samples, double z, bool exhaustive)
{
    auto cfg = resolve(o);
    uga::Rng rng(o.seed.value_or(cfg.seed_base));
    auto report = exhaustive ? uga::dmt_scan_exhaustive(cfg.function, order, rng)
                             : uga::dmt_scan(cfg.function, order, samples, z, rng);
    json out;
    out["order_scanned"] = report.order_scanned;
    out["combos_tested"] = report.combos_tested;
    json detected = json::array();
    for (const auto& c : report.detected_combos) {
        detected.push_back(loci_json(c));
    }
    out["detected_combos"] = detected;
    out["queries_used"] = report.queries_used;
    out["threshold"] = report.threshold;
    out["samples_per_cell"] = report.samples_per_cell;
    out["ga_queries_for_comparison"] = cfg.ga.population_size * cfg.ga.generations;
    if (!o.out.empty()) {
        fs::create_directories(o.out);
        std::ofstream(fs::path(o.out) / "dmt.json") << out.dump(2) << '\n';
    }
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_verify(std::size_t count, std::uint64_t seed)
{
    bool ok = true;
    for (const auto& check : uga::verify_marginal_properties(count, seed)) {
        std::cout << (check.passed ? "PASS " : "FAIL ") << check.name << "  (" << check.cases
                  << " cases, worst error " << check.worst_error << ")";
        if (!check.passed) {
            std::cout << "  first failure: " << check.first_failure;
        }
        std::cout << '\n';
        ok = ok && check.passed;
    }
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Uniform-crossover SGA on pivotal fitness functions"};
    app.require_subcommand(1);

    CommonOptions run_opts, exp_opts, cls_opts, dmt_opts;
    auto* run = app.add_subcommand("run", "single seeded run; trace written to --out/trace.csv");
    add_common(run, run_opts);

    bool quantiles = false;
    auto* experiment = app.add_subcommand("experiment", "replicate runs and summary statistics");
    add_common(experiment, exp_opts);
    experiment->add_flag("--quantiles", quantiles, "print trajectory quantiles too");

    auto* classify = app.add_subcommand("classify", "classify loci by final one-frequency");
    add_common(classify, cls_opts);

    std::size_t order = 2;
    std::size_t samples = 10000;
    double z = 5.0;
    bool exhaustive = false;
    auto* dmt = app.add_subcommand("dmt", "combinatorial differentiated-marginal scan");
    add_common(dmt, dmt_opts);
    dmt->add_option("--order", order, "combination size m");
    dmt->add_option("--samples", samples, "samples per cell");
    dmt->add_option("--z", z, "z threshold");
    dmt->add_flag("--exhaustive", exhaustive, "average over every completion instead of sampling");

    std::size_t verify_count = 50;
    std::uint64_t verify_seed = 7;
    auto* verify = app.add_subcommand("verify", "exact-marginal property suite");
    verify->add_option("--count", verify_count, "random descriptors per type");
    verify->add_option("--seed", verify_seed, "seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            return cmd_run(run_opts);
        }
        if (*experiment) {
            return cmd_experiment(exp_opts, quantiles);
        }
        if (*classify) {
            return cmd_classify(cls_opts);
        }
        if (*dmt) {
            return cmd_dmt(dmt_opts, order, samples, z, exhaustive);
        }
        return cmd_verify(verify_count, verify_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
