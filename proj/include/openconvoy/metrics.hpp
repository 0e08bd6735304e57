#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "openconvoy/sim/trace.hpp"

namespace openconvoy::metrics {

/// One time-indexed metric series (meters or m/s depending on the metric).
struct MetricSeries {
    std::vector<double> times_s;
    std::vector<double> values;
    std::string label;
};

/// Per follower: |gap to predecessor - desired gap| at every tick, meters.
/// Throws MalformedTraceError when the trace has no follower gap columns.
std::vector<MetricSeries> platooning_error(const sim::Trace& trace,
                                           double desired_gap_m);

/// Nearest-rank 95th percentile: sort ascending, take the element at index
/// ceil(0.95 * N) - 1. Throws std::invalid_argument on an empty series.
double percentile_95(const std::vector<double>& values);
double percentile_95(const MetricSeries& series);

/// Max speed minus min speed across all vehicles at each tick, m/s.
MetricSeries speed_difference(const sim::Trace& trace);

/// Time-mean of a series. Throws std::invalid_argument on an empty series.
double series_mean(const MetricSeries& series);

struct SweepSummaryRow {
    double per = 0.0;
    double mean_speed_difference_mps = 0.0;   // mean over seeds of time-means
    double p95_platooning_error_m = 0.0;      // mean over seeds of worst-follower p95
    int seed_count = 0;
};

struct SweepSummary {
    std::vector<SweepSummaryRow> rows;  // ordered by PER ascending
    std::vector<std::uint64_t> seeds;
};

using SweepKey = std::pair<double, std::uint64_t>;  // (per, seed)

/// Aggregates one trace per (per, seed) cell into per-level means. Every PER
/// level must carry at least one seed; a level with no traces at all cannot
/// occur by construction, but mismatched seed sets across levels throw.
SweepSummary sweep_aggregate(const std::map<SweepKey, sim::Trace>& traces,
                             double desired_gap_m);

/// Scalar summary of one run, as written by the metrics CLI.
struct RunMetrics {
    std::vector<double> p95_error_per_follower_m;
    double worst_p95_error_m = 0.0;
    double mean_speed_difference_mps = 0.0;
};

RunMetrics run_metrics(const sim::Trace& trace, double desired_gap_m);

}  // namespace openconvoy::metrics
