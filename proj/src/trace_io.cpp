#include "uga/trace_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "uga/error.hpp"

namespace uga {

std::string format_frequency(std::uint64_t count, std::uint64_t n)
{
    require(n > 0 && count <= n, "frequency needs 0 <= count <= n and n > 0");
    const unsigned __int128 scaled = (static_cast<unsigned __int128>(count) * 2000000 + n) / (2 * n);
    const auto micro = static_cast<std::uint64_t>(scaled);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%llu.%06llu", static_cast<unsigned long long>(micro / 1000000),
                  static_cast<unsigned long long>(micro % 1000000));
    return buf;
}

void write_traces(std::ostream& out, std::span<const IndexedTrace> traces)
{
    require(!traces.empty(), "no traces to write");
    out << kTraceHeader << '\n';
    for (const auto& t : traces) {
        const auto& f = t.frequencies;
        for (std::size_t row = 0; row < f.rows(); ++row) {
            const auto counts = f.row_counts(row);
            for (std::size_t locus = 0; locus < counts.size(); ++locus) {
                out << t.run << ',' << f.generation(row) << ',' << (locus + 1) << ','
                    << format_frequency(counts[locus], f.population_size()) << '\n';
            }
        }
    }
}

void export_traces(std::span<const IndexedTrace> traces, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open trace file " + path.string() + " for writing");
    }
    write_traces(out, traces);
    out.flush();
    if (!out) {
        throw IoError("write failed for trace file " + path.string());
    }
}

namespace {

template <typename T>
T parse_field(std::string_view text, std::size_t line, const std::string& source)
{
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw IoError(source + ":" + std::to_string(line) + ": bad field '" + std::string(text) + "'");
    }
    return value;
}

} // namespace

std::vector<TraceRow> read_traces(std::istream& in, const std::string& source)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError(source + ":1: missing header");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != kTraceHeader) {
        throw IoError(source + ":1: unexpected header '" + line + "'");
    }

    std::vector<TraceRow> rows;
    std::size_t number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::string_view rest(line);
        std::string_view fields[4];
        for (int i = 0; i < 4; ++i) {
            auto comma = rest.find(',');
            if ((i < 3) == (comma == std::string_view::npos)) {
                throw IoError(source + ":" + std::to_string(number) + ": expected 4 fields");
            }
            fields[i] = rest.substr(0, comma);
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
        TraceRow row;
        row.run = parse_field<std::size_t>(fields[0], number, source);
        row.generation = parse_field<std::uint64_t>(fields[1], number, source);
        row.locus = parse_field<std::size_t>(fields[2], number, source);
        row.one_frequency = parse_field<double>(fields[3], number, source);
        if (row.locus == 0 || row.one_frequency < 0.0 || row.one_frequency > 1.0) {
            throw IoError(source + ":" + std::to_string(number) + ": value out of range");
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<TraceRow> import_traces(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open trace file " + path.string());
    }
    return read_traces(in, path.string());
}

} // namespace uga
