#include "uga/harness.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "uga/classify.hpp"
#include "uga/error.hpp"

namespace uga {

ExperimentError::ExperimentError(std::size_t replicate, std::uint64_t seed, const std::string& what)
    : std::runtime_error("replicate " + std::to_string(replicate) + " (seed " + std::to_string(seed) +
                         ") failed: " + what),
      replicate_(replicate), seed_(seed)
{
}

bool is_rewarded_schema(const PivotalFunction& f, const std::string& schema)
{
    if (schema.size() != f.order()) {
        return false;
    }
    std::uint64_t pattern = 0;
    for (std::size_t j = 0; j < schema.size(); ++j) {
        pattern |= static_cast<std::uint64_t>(schema[j] == '1') << j;
    }
    return f.mean_for_pattern(pattern) > 0.0;
}

// --- accumulation ------------------------------------------------------------

SummaryAccumulator::SummaryAccumulator(const PivotalFunction& f) : function_(f) { }

void SummaryAccumulator::add(const ReplicateOutcome& outcome)
{
    const auto& tr = outcome.frequencies;
    require(tr.rows() > 0, "replicate has an empty trace");
    if (replicates_ == 0 && trajectories_.empty()) {
        population_size_ = tr.population_size();
        span_ = tr.span();
        generations_ = tr.generation(tr.rows() - 1);
        fixation_counts_.assign(span_, 0);
        wide_band_counts_.assign(span_, 0);
        final_frequency_.assign(span_, {});
        trajectory_generations_.assign(tr.generations().begin(), tr.generations().end());
        trajectories_.assign(tr.rows(), std::vector<std::vector<double>>(span_));
    }
    require(tr.span() == span_ && tr.population_size() == population_size_, "replicates differ in shape");
    require(std::equal(tr.generations().begin(), tr.generations().end(), trajectory_generations_.begin(),
                       trajectory_generations_.end()),
            "replicates recorded different generations");

    ++replicates_;
    const std::size_t last = tr.rows() - 1;
    const FrequencyBand classify_band{0.1, 0.9};
    const FrequencyBand wide_band{0.07, 0.93};
    for (std::size_t locus = 0; locus < span_; ++locus) {
        const auto count = tr.one_count(last, locus);
        fixation_counts_[locus] += classify_band.contains(count, population_size_) ? 0 : 1;
        wide_band_counts_[locus] += wide_band.contains(count, population_size_) ? 1 : 0;
        final_frequency_[locus].add(tr.one_frequency(last, locus));
    }
    for (std::size_t row = 0; row < tr.rows(); ++row) {
        for (std::size_t locus = 0; locus < span_; ++locus) {
            trajectories_[row][locus].push_back(tr.one_frequency(row, locus));
        }
    }
    dominant_.add(outcome.dominant.fraction);
    ++schema_counts_[outcome.dominant.schema];
    rewarded_ += is_rewarded_schema(function_, outcome.dominant.schema) ? 1 : 0;
    queries_ += outcome.queries;
}

void SummaryAccumulator::merge(const SummaryAccumulator& other)
{
    if (other.replicates_ == 0) {
        return;
    }
    if (replicates_ == 0) {
        *this = other;
        return;
    }
    require(other.span_ == span_ && other.population_size_ == population_size_ &&
                other.trajectory_generations_ == trajectory_generations_,
            "cannot merge summaries of differently shaped experiments");
    replicates_ += other.replicates_;
    for (std::size_t locus = 0; locus < span_; ++locus) {
        fixation_counts_[locus] += other.fixation_counts_[locus];
        wide_band_counts_[locus] += other.wide_band_counts_[locus];
        final_frequency_[locus].merge(other.final_frequency_[locus]);
    }
    for (std::size_t row = 0; row < trajectories_.size(); ++row) {
        for (std::size_t locus = 0; locus < span_; ++locus) {
            auto& dst = trajectories_[row][locus];
            const auto& src = other.trajectories_[row][locus];
            dst.insert(dst.end(), src.begin(), src.end());
        }
    }
    dominant_.merge(other.dominant_);
    for (const auto& [schema, n] : other.schema_counts_) {
        schema_counts_[schema] += n;
    }
    rewarded_ += other.rewarded_;
    queries_ += other.queries_;
}

ExperimentSummary SummaryAccumulator::finish() const
{
    require(replicates_ > 0, "no replicates to summarize");
    ExperimentSummary s;
    s.replicates = replicates_;
    s.population_size = population_size_;
    s.span = span_;
    s.generations = generations_;
    s.fixation_counts = fixation_counts_;
    s.inside_wide_band_counts = wide_band_counts_;
    for (const auto& acc : final_frequency_) {
        s.mean_final_frequency.push_back(acc.mean());
    }
    s.dominant_fraction_mean = dominant_.mean();
    s.dominant_fraction_se = dominant_.standard_error();
    s.dominant_schema_counts = schema_counts_;
    s.rewarded_schema_runs = rewarded_;
    for (std::size_t row = 0; row < trajectories_.size(); ++row) {
        for (std::size_t locus = 0; locus < span_; ++locus) {
            const auto& v = trajectories_[row][locus];
            s.trajectory_quantiles.push_back({trajectory_generations_[row], locus + 1, quantile(v, 0.05),
                                              quantile(v, 0.25), quantile(v, 0.5), quantile(v, 0.75),
                                              quantile(v, 0.95)});
        }
    }
    s.total_queries = queries_;
    s.significance_bound = significance_bound(replicates_, kSignificanceFailureRate);
    return s;
}

ExperimentSummary summarize(const PivotalFunction& f, std::span<const ReplicateOutcome> outcomes)
{
    SummaryAccumulator acc(f);
    for (const auto& o : outcomes) {
        acc.add(o);
    }
    return acc.finish();
}

// --- execution ---------------------------------------------------------------

ReplicateOutcome run_replicate(const ExperimentConfig& cfg, std::size_t index)
{
    GAConfig ga = cfg.ga;
    ga.seed = derive_seed(cfg.seed_base, index);
    RunOptions options;
    options.schedule = cfg.schedule;
    const auto loci = cfg.function.loci();
    options.schema = SchemaPartition(std::vector<std::size_t>(loci.begin(), loci.end()));

    ReplicateOutcome out;
    out.index = index;
    out.seed = ga.seed;
    try {
        auto trace = run(cfg.function, ga, options);
        out.frequencies = std::move(trace.frequencies);
        out.dominant = trace.schema_records.back().dominant;
        out.queries = trace.queries;
    } catch (const std::exception& e) {
        throw ExperimentError(index, ga.seed, e.what());
    }
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg)
{
    cfg.validate();
    ExperimentResult result;
    result.outcomes.resize(cfg.replicates);

    std::size_t threads = cfg.threads != 0 ? cfg.threads : std::max(1U, std::thread::hardware_concurrency());
    threads = std::min(threads, cfg.replicates);

    std::atomic<std::size_t> next{0};
    std::mutex failure_mutex;
    std::optional<std::size_t> failed_index;
    std::exception_ptr failure;

    auto worker = [&]() {
        for (;;) {
            const auto i = next.fetch_add(1);
            if (i >= cfg.replicates) {
                return;
            }
            try {
                result.outcomes[i] = run_replicate(cfg, i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                // Report the lowest failing index so the error is the same for
                // any thread count.
                if (!failed_index || i < *failed_index) {
                    failed_index = i;
                    failure = std::current_exception();
                }
                next.store(cfg.replicates);
                return;
            }
        }
    };

    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    result.summary = summarize(cfg.function, result.outcomes);
    return result;
}

// --- persistence -------------------------------------------------------------

std::vector<IndexedTrace> traces_of(std::span<const ReplicateOutcome> outcomes)
{
    std::vector<IndexedTrace> traces;
    traces.reserve(outcomes.size());
    for (const auto& o : outcomes) {
        traces.push_back({o.index, o.frequencies});
    }
    return traces;
}

nlohmann::json summary_to_json(const ExperimentSummary& s)
{
    nlohmann::json j;
    j["replicates"] = s.replicates;
    j["population_size"] = s.population_size;
    j["span"] = s.span;
    j["generations"] = s.generations;
    j["fixation_counts"] = s.fixation_counts;
    j["inside_wide_band_counts"] = s.inside_wide_band_counts;
    j["mean_final_frequency"] = s.mean_final_frequency;
    j["dominant_fraction_mean"] = s.dominant_fraction_mean;
    j["dominant_fraction_se"] = s.dominant_fraction_se ? nlohmann::json(*s.dominant_fraction_se) : nlohmann::json();
    j["dominant_schema_counts"] = s.dominant_schema_counts;
    j["rewarded_schema_runs"] = s.rewarded_schema_runs;
    auto& q = j["trajectory_quantiles"] = nlohmann::json::array();
    for (const auto& t : s.trajectory_quantiles) {
        q.push_back({{"generation", t.generation}, {"locus", t.locus}, {"q05", t.q05}, {"q25", t.q25},
                     {"q50", t.q50}, {"q75", t.q75}, {"q95", t.q95}});
    }
    j["total_queries"] = s.total_queries;
    j["significance_bound"] = s.significance_bound;
    return j;
}

void persist_experiment(const ExperimentConfig& cfg, const ExperimentResult& result, const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    }
    const auto traces = traces_of(result.outcomes);
    export_traces(traces, dir / "traces.csv");

    const auto summary_path = dir / "summary.json";
    std::ofstream out(summary_path);
    if (!out) {
        throw IoError("cannot write " + summary_path.string());
    }
    out << summary_to_json(result.summary).dump(2) << '\n';
    if (!out) {
        throw IoError("write failed for " + summary_path.string());
    }
    save_config(cfg, dir / "config.json");
}

} // namespace uga
