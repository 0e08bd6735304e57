#include "openconvoy/sim/trace.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "openconvoy/errors.hpp"

namespace openconvoy::sim {

namespace {

std::string format_double(double value) {
    char buffer[32];
    // Round-trippable formatting keeps same-seed traces byte-identical.
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

std::vector<std::string> expected_columns(int vehicle_count) {
    std::vector<std::string> columns;
    columns.emplace_back("time_s");
    for (int v = 0; v < vehicle_count; ++v) {
        const std::string prefix = "veh" + std::to_string(v) + "_";
        for (const char* field : {"east_m", "north_m", "speed_mps", "heading_rad",
                                  "cmd_speed_mps", "cmd_steer_rad"}) {
            columns.push_back(prefix + field);
        }
    }
    for (int v = 1; v < vehicle_count; ++v) {
        const std::string prefix = "veh" + std::to_string(v) + "_";
        for (const char* field : {"gap_m", "rx_delivered", "rx_dropped"}) {
            columns.push_back(prefix + field);
        }
    }
    return columns;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream stream(line);
    while (std::getline(stream, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_double(const std::string& cell, const std::string& column, size_t line_no) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw MalformedTraceError("line " + std::to_string(line_no) + ", column '" +
                                  column + "': not a number: '" + cell + "'");
    }
    return value;
}

std::uint64_t parse_u64(const std::string& cell, const std::string& column,
                        size_t line_no) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw MalformedTraceError("line " + std::to_string(line_no) + ", column '" +
                                  column + "': not a counter: '" + cell + "'");
    }
    return value;
}

}  // namespace

void write_trace_csv(const Trace& trace, std::ostream& out) {
    out << "# schema=" << kTraceSchemaVersion << "\n";
    const auto columns = expected_columns(trace.vehicle_count);
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out << (i == 0 ? "" : ",") << columns[i];
    }
    out << "\n";
    for (const TraceRow& row : trace.rows) {
        out << format_double(row.time_s);
        for (const VehicleTick& v : row.vehicles) {
            out << ',' << format_double(v.east_m) << ',' << format_double(v.north_m)
                << ',' << format_double(v.speed_mps) << ','
                << format_double(v.heading_rad) << ',' << format_double(v.cmd_speed_mps)
                << ',' << format_double(v.cmd_steer_rad);
        }
        for (const FollowerTick& f : row.followers) {
            out << ',' << format_double(f.gap_m) << ',' << f.rx_delivered << ','
                << f.rx_dropped;
        }
        out << "\n";
    }
}

std::string trace_to_csv(const Trace& trace) {
    std::ostringstream out;
    write_trace_csv(trace, out);
    return out.str();
}

Trace read_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw MalformedTraceError("empty trace file");
    if (line.rfind("# schema=", 0) != 0) {
        throw MalformedTraceError("missing '# schema=' comment on line 1");
    }
    const std::string version = line.substr(9);
    if (version != std::to_string(kTraceSchemaVersion)) {
        throw MalformedTraceError("unsupported trace schema '" + version + "'");
    }
    if (!std::getline(in, line)) throw MalformedTraceError("missing header row");
    const auto header = split_csv_line(line);

    // Vehicle count from the header shape: blocks of 6 after time_s, then
    // blocks of 3 per follower. columns = 1 + 6n + 3(n-1).
    int vehicle_count = 0;
    for (const std::string& column : header) {
        if (column.rfind("veh", 0) == 0 &&
            column.find("_east_m") != std::string::npos) {
            ++vehicle_count;
        }
    }
    if (vehicle_count < 1) {
        throw MalformedTraceError("header has no vehXX_east_m columns");
    }
    const auto expected = expected_columns(vehicle_count);
    if (header != expected) {
        // Name the first mismatch for the diagnostic.
        for (std::size_t i = 0; i < std::max(header.size(), expected.size()); ++i) {
            const std::string got = i < header.size() ? header[i] : "<missing>";
            const std::string want = i < expected.size() ? expected[i] : "<extra>";
            if (got != want) {
                throw MalformedTraceError("header column " + std::to_string(i + 1) +
                                          ": expected '" + want + "', got '" + got +
                                          "'");
            }
        }
    }

    Trace trace;
    trace.vehicle_count = vehicle_count;
    std::size_t line_no = 2;
    double previous_time = -1.0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != expected.size()) {
            throw MalformedTraceError("line " + std::to_string(line_no) + ": expected " +
                                      std::to_string(expected.size()) + " cells, got " +
                                      std::to_string(cells.size()));
        }
        TraceRow row;
        std::size_t i = 0;
        row.time_s = parse_double(cells[i], expected[i], line_no);
        ++i;
        if (row.time_s <= previous_time) {
            throw MalformedTraceError("line " + std::to_string(line_no) +
                                      ": time_s not strictly increasing");
        }
        previous_time = row.time_s;
        row.vehicles.resize(vehicle_count);
        for (VehicleTick& v : row.vehicles) {
            v.east_m = parse_double(cells[i], expected[i], line_no); ++i;
            v.north_m = parse_double(cells[i], expected[i], line_no); ++i;
            v.speed_mps = parse_double(cells[i], expected[i], line_no); ++i;
            v.heading_rad = parse_double(cells[i], expected[i], line_no); ++i;
            v.cmd_speed_mps = parse_double(cells[i], expected[i], line_no); ++i;
            v.cmd_steer_rad = parse_double(cells[i], expected[i], line_no); ++i;
        }
        row.followers.resize(vehicle_count - 1);
        for (FollowerTick& f : row.followers) {
            f.gap_m = parse_double(cells[i], expected[i], line_no); ++i;
            f.rx_delivered = parse_u64(cells[i], expected[i], line_no); ++i;
            f.rx_dropped = parse_u64(cells[i], expected[i], line_no); ++i;
        }
        trace.rows.push_back(std::move(row));
    }
    return trace;
}

Trace read_trace_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedTraceError("cannot open trace file: " + path);
    return read_trace_csv(in);
}

}  // namespace openconvoy::sim
