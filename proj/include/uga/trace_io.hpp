#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "uga/sga.hpp"

namespace uga {

/// One trajectory of one run, tagged with its replicate index.
struct IndexedTrace {
    std::size_t run = 0;
    OneFrequencyTrace frequencies;
};

/// One data row of a trace file. `locus` is 1-based as in the file.
struct TraceRow {
    std::size_t run = 0;
    std::uint64_t generation = 0;
    std::size_t locus = 0;
    double one_frequency = 0.0;

    friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

inline constexpr const char* kTraceHeader = "run,generation,locus,one_frequency";

/// count / n rounded half-up to six decimals, computed in integers.
std::string format_frequency(std::uint64_t count, std::uint64_t n);

/// CSV with header `run,generation,locus,one_frequency`; rows ordered by run,
/// then generation, then locus.
void write_traces(std::ostream& out, std::span<const IndexedTrace> traces);
void export_traces(std::span<const IndexedTrace> traces, const std::filesystem::path& path);

/// Parse errors name the 1-based line number.
std::vector<TraceRow> read_traces(std::istream& in, const std::string& source = "<stream>");
std::vector<TraceRow> import_traces(const std::filesystem::path& path);

} // namespace uga
