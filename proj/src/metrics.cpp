#include "openconvoy/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "openconvoy/errors.hpp"

namespace openconvoy::metrics {

std::vector<MetricSeries> platooning_error(const sim::Trace& trace,
                                           double desired_gap_m) {
    if (trace.rows.empty()) throw MalformedTraceError("trace has no rows");
    const int followers = trace.vehicle_count - 1;
    if (followers < 1) {
        throw MalformedTraceError("trace has no follower gap columns");
    }
    std::vector<MetricSeries> series(static_cast<std::size_t>(followers));
    for (int f = 0; f < followers; ++f) {
        series[static_cast<std::size_t>(f)].label =
            "veh" + std::to_string(f + 1) + "_platooning_error_m";
    }
    for (const sim::TraceRow& row : trace.rows) {
        if (row.followers.size() != static_cast<std::size_t>(followers)) {
            throw MalformedTraceError("row missing follower gap cells");
        }
        for (int f = 0; f < followers; ++f) {
            auto& s = series[static_cast<std::size_t>(f)];
            s.times_s.push_back(row.time_s);
            s.values.push_back(
                std::abs(row.followers[static_cast<std::size_t>(f)].gap_m -
                         desired_gap_m));
        }
    }
    return series;
}

double percentile_95(const std::vector<double>& values) {
    if (values.empty()) {
        throw std::invalid_argument("percentile of an empty series");
    }
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const std::size_t rank =
        static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
    return sorted[rank - 1];
}

double percentile_95(const MetricSeries& series) { return percentile_95(series.values); }

MetricSeries speed_difference(const sim::Trace& trace) {
    if (trace.rows.empty()) throw MalformedTraceError("trace has no rows");
    MetricSeries series;
    series.label = "speed_difference_mps";
    for (const sim::TraceRow& row : trace.rows) {
        if (row.vehicles.empty()) throw MalformedTraceError("row has no vehicles");
        double lo = row.vehicles.front().speed_mps;
        double hi = lo;
        for (const sim::VehicleTick& v : row.vehicles) {
            lo = std::min(lo, v.speed_mps);
            hi = std::max(hi, v.speed_mps);
        }
        series.times_s.push_back(row.time_s);
        series.values.push_back(hi - lo);
    }
    return series;
}

double series_mean(const MetricSeries& series) {
    if (series.values.empty()) throw std::invalid_argument("mean of an empty series");
    return std::accumulate(series.values.begin(), series.values.end(), 0.0) /
           static_cast<double>(series.values.size());
}

RunMetrics run_metrics(const sim::Trace& trace, double desired_gap_m) {
    RunMetrics out;
    for (const MetricSeries& s : platooning_error(trace, desired_gap_m)) {
        out.p95_error_per_follower_m.push_back(percentile_95(s));
    }
    out.worst_p95_error_m = *std::max_element(out.p95_error_per_follower_m.begin(),
                                              out.p95_error_per_follower_m.end());
    out.mean_speed_difference_mps = series_mean(speed_difference(trace));
    return out;
}

SweepSummary sweep_aggregate(const std::map<SweepKey, sim::Trace>& traces,
                             double desired_gap_m) {
    if (traces.empty()) throw std::invalid_argument("sweep has no traces");

    std::set<double> levels;
    std::set<std::uint64_t> seeds;
    for (const auto& [key, _] : traces) {
        levels.insert(key.first);
        seeds.insert(key.second);
    }
    SweepSummary summary;
    summary.seeds.assign(seeds.begin(), seeds.end());
    for (double per : levels) {
        SweepSummaryRow row;
        row.per = per;
        double speed_sum = 0.0;
        double error_sum = 0.0;
        for (const auto& [key, trace] : traces) {
            if (key.first != per) continue;
            const RunMetrics metrics = run_metrics(trace, desired_gap_m);
            speed_sum += metrics.mean_speed_difference_mps;
            error_sum += metrics.worst_p95_error_m;
            ++row.seed_count;
        }
        if (row.seed_count == 0) {
            throw std::invalid_argument("sweep level has no traces");
        }
        row.mean_speed_difference_mps = speed_sum / row.seed_count;
        row.p95_platooning_error_m = error_sum / row.seed_count;
        summary.rows.push_back(row);
    }
    return summary;
}

}  // namespace openconvoy::metrics
