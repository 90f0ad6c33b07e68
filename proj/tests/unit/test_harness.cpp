#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "uga/config.hpp"
#include "uga/error.hpp"
#include "uga/harness.hpp"
#include "uga/trace_io.hpp"

namespace fs = std::filesystem;

namespace {

uga::ExperimentConfig small_config(std::size_t replicates, std::size_t threads)
{
    auto cfg = uga::experiment1_config(replicates, 17);
    cfg.ga.population_size = 60;
    cfg.ga.generations = 12;
    cfg.threads = threads;
    return cfg;
}

std::string csv_of(std::span<const uga::ReplicateOutcome> outcomes)
{
    std::ostringstream out;
    uga::write_traces(out, uga::traces_of(outcomes));
    return out.str();
}

fs::path scratch(const std::string& name)
{
    auto dir = fs::temp_directory_path() / ("uga_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("reference experiment presets")
{
    auto e1 = uga::experiment1_config();
    CHECK(e1.replicates == 300);
    CHECK(e1.function.type() == 1);
    CHECK(e1.function.span() == 4);
    CHECK(e1.function.delta() == 0.18);
    CHECK(e1.ga.generations == 200);
    CHECK(e1.ga.population_size == 1500);

    auto e2 = uga::experiment2_config();
    CHECK(e2.function.type() == 2);
    CHECK(e2.function.order() == 4);
    CHECK(e2.function.span() == 5);
    CHECK(e2.function.delta() == 0.25);
    CHECK(e2.ga.generations == 1000);
}

TEST_CASE("config JSON round trip uses 1-based loci")
{
    uga::Rng rng(2);
    auto cfg = uga::ExperimentConfig(uga::random_pivotal(1, 3, 0.5, 0.2, 40, rng));
    cfg.ga.mutation_rate = 0.01;
    cfg.replicates = 9;
    cfg.seed_base = 123;
    cfg.schedule.stride = 5;
    cfg.schedule.explicit_generations = {3, 4};
    auto j = uga::config_to_json(cfg);
    CHECK(j["function"]["loci"][0].get<std::size_t>() == cfg.function.loci()[0] + 1);

    auto back = uga::config_from_json(j);
    CHECK(back.function == cfg.function);
    CHECK(back.ga == cfg.ga);
    CHECK(back.replicates == 9);
    CHECK(back.seed_base == 123);
    CHECK(back.schedule.stride == 5);
    CHECK(back.schedule.explicit_generations == std::vector<std::uint64_t>{3, 4});

    auto dir = scratch("config");
    uga::save_config(cfg, dir / "c.json");
    CHECK(uga::load_config(dir / "c.json").function == cfg.function);

    auto t2 = uga::function_from_json(uga::function_to_json(uga::experiment2_config().function));
    CHECK(t2 == uga::experiment2_config().function);

    auto bad = j;
    bad["function"]["loci"][0] = 0;
    CHECK_THROWS_AS(uga::config_from_json(bad), uga::ContractViolation);
    CHECK_THROWS(uga::load_config(dir / "missing.json"));
}

TEST_CASE("frequency formatting")
{
    CHECK(uga::format_frequency(0, 1500) == "0.000000");
    CHECK(uga::format_frequency(1500, 1500) == "1.000000");
    CHECK(uga::format_frequency(1, 3) == "0.333333");
    CHECK(uga::format_frequency(2, 3) == "0.666667");
    CHECK(uga::format_frequency(1, 8) == "0.125000");
    CHECK(uga::format_frequency(1, 2000000) == "0.000001");
}

TEST_CASE("trace export layout")
{
    uga::OneFrequencyTrace t(4, 4);
    t.add_row(0, {0, 1, 2, 4});
    t.add_row(1, {4, 3, 2, 1});
    std::vector<uga::IndexedTrace> traces{{0, t}};
    std::ostringstream out;
    uga::write_traces(out, traces);
    std::istringstream in(out.str());
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) {
        lines.push_back(line);
    }
    REQUIRE(lines.size() == 9);
    CHECK(lines[0] == uga::kTraceHeader);
    CHECK(lines[1] == "0,0,1,0.000000");
    CHECK(lines[4] == "0,0,4,1.000000");
    CHECK(lines[5] == "0,1,1,1.000000");

    std::istringstream reread(out.str());
    auto rows = uga::read_traces(reread);
    REQUIRE(rows.size() == 8);
    CHECK(rows[2] == uga::TraceRow{0, 0, 3, 0.5});
}

TEST_CASE("trace files survive a write-read-write cycle byte for byte")
{
    auto result = uga::run_experiment(small_config(3, 1));
    auto dir = scratch("traces");
    const auto traces = uga::traces_of(result.outcomes);
    uga::export_traces(traces, dir / "a.csv");
    auto rows = uga::import_traces(dir / "a.csv");

    std::map<std::size_t, uga::IndexedTrace> rebuilt;
    std::map<std::pair<std::size_t, std::uint64_t>, std::vector<std::uint32_t>> counts;
    for (const auto& r : rows) {
        counts[{r.run, r.generation}].push_back(static_cast<std::uint32_t>(std::lround(r.one_frequency * 60)));
    }
    for (auto& [key, c] : counts) {
        auto& t = rebuilt[key.first];
        t.run = key.first;
        if (t.frequencies.span() == 0) {
            t.frequencies = uga::OneFrequencyTrace(60, 4);
        }
        t.frequencies.add_row(key.second, c);
    }
    std::vector<uga::IndexedTrace> again;
    for (auto& [_, t] : rebuilt) {
        again.push_back(t);
    }
    uga::export_traces(again, dir / "b.csv");

    std::ifstream a(dir / "a.csv");
    std::ifstream b(dir / "b.csv");
    std::stringstream sa;
    std::stringstream sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
}

TEST_CASE("empty traces produce a header-only file and are rejected on export")
{
    uga::OneFrequencyTrace empty(10, 3);
    std::vector<uga::IndexedTrace> traces{{0, empty}};
    std::ostringstream out;
    uga::write_traces(out, traces);
    CHECK(out.str() == std::string(uga::kTraceHeader) + "\n");
    std::istringstream in(out.str());
    CHECK(uga::read_traces(in).empty());
    CHECK_THROWS_AS(uga::export_traces({}, scratch("empty") / "x.csv"), uga::ContractViolation);
}

TEST_CASE("malformed trace rows report their line")
{
    std::istringstream bad_header("run,gen,locus,freq\n");
    CHECK_THROWS_AS(uga::read_traces(bad_header), uga::IoError);

    std::istringstream bad_row(std::string(uga::kTraceHeader) + "\n0,0,1,0.5\n0,x,1,0.5\n");
    try {
        uga::read_traces(bad_row, "t.csv");
        FAIL("expected a parse error");
    } catch (const uga::IoError& e) {
        CHECK(std::string(e.what()).find("t.csv:3") != std::string::npos);
    }

    std::istringstream zero_locus(std::string(uga::kTraceHeader) + "\n0,0,0,0.5\n");
    CHECK_THROWS_AS(uga::read_traces(zero_locus), uga::IoError);
    std::istringstream out_of_range(std::string(uga::kTraceHeader) + "\n0,0,1,1.5\n");
    CHECK_THROWS_AS(uga::read_traces(out_of_range), uga::IoError);
}

TEST_CASE("summaries do not depend on the thread count")
{
    auto serial = uga::run_experiment(small_config(8, 1));
    auto parallel = uga::run_experiment(small_config(8, 3));
    CHECK(csv_of(serial.outcomes) == csv_of(parallel.outcomes));
    CHECK(uga::summary_to_json(serial.summary) == uga::summary_to_json(parallel.summary));
    CHECK(serial.summary.total_queries == 8ULL * 60 * 12);
    CHECK(serial.summary.replicates == 8);
    CHECK(serial.summary.significance_bound == doctest::Approx(std::pow(0.995, 8)));
}

TEST_CASE("merging shard summaries matches a serial reduction")
{
    auto result = uga::run_experiment(small_config(10, 1));
    auto cfg = small_config(10, 1);
    uga::SummaryAccumulator left(cfg.function);
    uga::SummaryAccumulator right(cfg.function);
    for (std::size_t i = 0; i < result.outcomes.size(); ++i) {
        (i < 4 ? left : right).add(result.outcomes[i]);
    }
    left.merge(right);
    auto merged = left.finish();
    const auto& whole = result.summary;
    CHECK(merged.fixation_counts == whole.fixation_counts);
    CHECK(merged.inside_wide_band_counts == whole.inside_wide_band_counts);
    CHECK(merged.dominant_schema_counts == whole.dominant_schema_counts);
    CHECK(merged.rewarded_schema_runs == whole.rewarded_schema_runs);
    CHECK(merged.total_queries == whole.total_queries);
    CHECK(std::abs(merged.dominant_fraction_mean - whole.dominant_fraction_mean) <= 1e-12);
    REQUIRE(merged.dominant_fraction_se.has_value());
    CHECK(std::abs(*merged.dominant_fraction_se - *whole.dominant_fraction_se) <= 1e-12);
    for (std::size_t l = 0; l < 4; ++l) {
        CHECK(std::abs(merged.mean_final_frequency[l] - whole.mean_final_frequency[l]) <= 1e-12);
    }
    REQUIRE(merged.trajectory_quantiles.size() == whole.trajectory_quantiles.size());
    for (std::size_t i = 0; i < merged.trajectory_quantiles.size(); ++i) {
        CHECK(merged.trajectory_quantiles[i].q50 == whole.trajectory_quantiles[i].q50);
    }
}

TEST_CASE("a single replicate has no standard error")
{
    auto result = uga::run_experiment(small_config(1, 1));
    CHECK_FALSE(result.summary.dominant_fraction_se.has_value());
    CHECK(uga::summary_to_json(result.summary)["dominant_fraction_se"].is_null());
}

TEST_CASE("replicate seeds are derived from the base")
{
    auto cfg = small_config(2, 1);
    auto a = uga::run_replicate(cfg, 1);
    CHECK(a.seed == uga::derive_seed(17, 1));
    CHECK(a.index == 1);
    CHECK(a.dominant.schema.size() == 3);
}

TEST_CASE("a failing replicate reports its seed")
{
    auto cfg = small_config(2, 1);
    cfg.ga.mutation_rate = 2.0;
    try {
        uga::run_replicate(cfg, 5);
        FAIL("expected a failure");
    } catch (const uga::ExperimentError& e) {
        CHECK(e.replicate() == 5);
        CHECK(e.seed() == uga::derive_seed(17, 5));
        CHECK(std::string(e.what()).find(std::to_string(e.seed())) != std::string::npos);
    }
}

TEST_CASE("rewarded schemas")
{
    auto f1 = uga::experiment1_config().function;
    CHECK(uga::is_rewarded_schema(f1, "111"));
    CHECK(uga::is_rewarded_schema(f1, "000"));
    CHECK_FALSE(uga::is_rewarded_schema(f1, "101"));
    auto f2 = uga::experiment2_config().function;
    CHECK(uga::is_rewarded_schema(f2, "0001"));
    CHECK_FALSE(uga::is_rewarded_schema(f2, "0011"));
}

TEST_CASE("persisting an experiment writes three files")
{
    auto cfg = small_config(2, 1);
    auto result = uga::run_experiment(cfg);
    auto dir = scratch("persist");
    uga::persist_experiment(cfg, result, dir);
    CHECK(fs::exists(dir / "traces.csv"));
    CHECK(fs::exists(dir / "summary.json"));
    CHECK(fs::exists(dir / "config.json"));
    CHECK(uga::load_config(dir / "config.json").function == cfg.function);
}
