#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace openconvoy::sim {

inline constexpr int kTraceSchemaVersion = 1;

/// Per-vehicle ground truth and commands at one tick.
struct VehicleTick {
    double east_m = 0.0;
    double north_m = 0.0;
    double speed_mps = 0.0;
    double heading_rad = 0.0;
    double cmd_speed_mps = 0.0;
    double cmd_steer_rad = 0.0;
};

/// Per-follower channel bookkeeping at one tick (cumulative counters).
struct FollowerTick {
    double gap_m = 0.0;  // ENU distance to the immediate predecessor
    std::uint64_t rx_delivered = 0;
    std::uint64_t rx_dropped = 0;
};

struct TraceRow {
    double time_s = 0.0;
    std::vector<VehicleTick> vehicles;    // size = vehicle_count
    std::vector<FollowerTick> followers;  // size = vehicle_count - 1
};

struct Trace {
    int vehicle_count = 0;
    std::vector<TraceRow> rows;
};

/// CSV with a `# schema=1` comment line, a header row with units, then one
/// row per tick.
void write_trace_csv(const Trace& trace, std::ostream& out);
std::string trace_to_csv(const Trace& trace);

/// Parses a trace CSV. Throws MalformedTraceError naming the missing or
/// mismatched column.
Trace read_trace_csv(std::istream& in);
Trace read_trace_csv_file(const std::string& path);

}  // namespace openconvoy::sim
