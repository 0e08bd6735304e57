// Python bindings for the platooning core: geodesy, wire codec, loss model,
// state store + spacing policy, controllers, plant, scenario engine, metrics.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <variant>

#include "openconvoy/angles.hpp"
#include "openconvoy/control.hpp"
#include "openconvoy/errors.hpp"
#include "openconvoy/geo.hpp"
#include "openconvoy/metrics.hpp"
#include "openconvoy/model.hpp"
#include "openconvoy/net/codec.hpp"
#include "openconvoy/net/loss.hpp"
#include "openconvoy/policy.hpp"
#include "openconvoy/sim/plant.hpp"
#include "openconvoy/sim/scenario.hpp"
#include "openconvoy/sim/scenario_io.hpp"
#include "openconvoy/sim/trace.hpp"

namespace py = pybind11;
using namespace openconvoy;

namespace {

std::vector<double> trace_times(const sim::Trace& trace) {
    std::vector<double> times;
    times.reserve(trace.rows.size());
    for (const auto& row : trace.rows) times.push_back(row.time_s);
    return times;
}

std::vector<double> trace_gaps(const sim::Trace& trace, int follower) {
    if (follower < 1 || follower >= trace.vehicle_count) {
        throw py::index_error("follower index out of range");
    }
    std::vector<double> gaps;
    gaps.reserve(trace.rows.size());
    for (const auto& row : trace.rows) {
        gaps.push_back(row.followers[static_cast<std::size_t>(follower - 1)].gap_m);
    }
    return gaps;
}

std::vector<double> trace_speeds(const sim::Trace& trace, int vehicle) {
    if (vehicle < 0 || vehicle >= trace.vehicle_count) {
        throw py::index_error("vehicle index out of range");
    }
    std::vector<double> speeds;
    speeds.reserve(trace.rows.size());
    for (const auto& row : trace.rows) {
        speeds.push_back(row.vehicles[static_cast<std::size_t>(vehicle)].speed_mps);
    }
    return speeds;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Cooperative-driving platooning simulator core";
    m.attr("__version__") = "0.1.0";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<TransportError>(m, "TransportError", PyExc_OSError);
    py::register_exception<MalformedTraceError>(m, "MalformedTraceError",
                                                PyExc_ValueError);

    // ---- geodesy ----------------------------------------------------------
    py::class_<geo::GeoPoint>(m, "GeoPoint")
        .def(py::init<double, double, double>(), py::arg("latitude_deg"),
             py::arg("longitude_deg"), py::arg("altitude_m") = 0.0)
        .def_readwrite("latitude_deg", &geo::GeoPoint::latitude_deg)
        .def_readwrite("longitude_deg", &geo::GeoPoint::longitude_deg)
        .def_readwrite("altitude_m", &geo::GeoPoint::altitude_m)
        .def("__repr__", [](const geo::GeoPoint& p) {
            std::ostringstream out;
            out << "GeoPoint(" << p.latitude_deg << ", " << p.longitude_deg << ", "
                << p.altitude_m << ")";
            return out.str();
        });
    py::class_<geo::EnuPoint>(m, "EnuPoint")
        .def(py::init<double, double, double>(), py::arg("east_m"),
             py::arg("north_m"), py::arg("up_m") = 0.0)
        .def_readwrite("east_m", &geo::EnuPoint::east_m)
        .def_readwrite("north_m", &geo::EnuPoint::north_m)
        .def_readwrite("up_m", &geo::EnuPoint::up_m)
        .def("__repr__", [](const geo::EnuPoint& p) {
            std::ostringstream out;
            out << "EnuPoint(" << p.east_m << ", " << p.north_m << ", " << p.up_m
                << ")";
            return out.str();
        });
    m.def("enu_from_geodetic", &geo::enu_from_geodetic, py::arg("reference"),
          py::arg("point"));
    m.def("geodetic_from_enu", &geo::geodetic_from_enu, py::arg("reference"),
          py::arg("offset"));
    m.def("bearing_enu", &geo::bearing_enu, py::arg("from_point"), py::arg("to_point"));
    m.def("wrap_two_pi", &wrap_two_pi);
    m.def("wrap_pi", &wrap_pi);

    // ---- vehicle state and store ------------------------------------------
    py::class_<model::VehicleState>(m, "VehicleState")
        .def(py::init<>())
        .def_readwrite("vehicle_id", &model::VehicleState::vehicle_id)
        .def_readwrite("timestamp_us", &model::VehicleState::timestamp_us)
        .def_readwrite("position", &model::VehicleState::position)
        .def_readwrite("speed_mps", &model::VehicleState::speed_mps)
        .def_readwrite("heading_rad", &model::VehicleState::heading_rad)
        .def_readwrite("accel_mps2", &model::VehicleState::accel_mps2)
        .def_readwrite("sequence", &model::VehicleState::sequence)
        .def("is_valid", &model::VehicleState::is_valid);

    py::class_<model::StoreSnapshot>(m, "StoreSnapshot")
        .def_readonly("own_id", &model::StoreSnapshot::own_id)
        .def_readonly("taken_at_us", &model::StoreSnapshot::taken_at_us)
        .def("sources", &model::StoreSnapshot::sources)
        .def("fresh_latest", &model::StoreSnapshot::fresh_latest, py::arg("source"));

    py::enum_<model::InsertResult>(m, "InsertResult")
        .value("ACCEPTED", model::InsertResult::accepted)
        .value("REJECTED_GATE", model::InsertResult::rejected_gate)
        .value("REJECTED_SEQUENCE", model::InsertResult::rejected_sequence);

    py::class_<model::StateStore>(m, "StateStore")
        .def(py::init<model::VehicleId, std::size_t, std::uint64_t,
                      const model::VehicleState&>(),
             py::arg("own_id"), py::arg("buffer_depth"),
             py::arg("staleness_horizon_us"), py::arg("initial_own"))
        .def(
            "insert",
            [](model::StateStore& store, const model::VehicleState& incoming,
               const std::string& rx_gate) {
                return store.insert(incoming, policy::rx_gate_by_name(rx_gate));
            },
            py::arg("incoming"), py::arg("rx_gate") = "all_predecessor")
        .def("update_own", &model::StateStore::update_own, py::arg("own_state"))
        .def("latest", &model::StateStore::latest, py::arg("source"),
             py::arg("now_us"))
        .def("snapshot", &model::StateStore::snapshot, py::arg("now_us"));

    py::class_<model::ConvoyConfig>(m, "ConvoyConfig")
        .def(py::init<>())
        .def_readwrite("vehicle_count", &model::ConvoyConfig::vehicle_count)
        .def_readwrite("ego_index", &model::ConvoyConfig::ego_index)
        .def_readwrite("desired_gap_m", &model::ConvoyConfig::desired_gap_m)
        .def_readwrite("broadcast_period_s", &model::ConvoyConfig::broadcast_period_s)
        .def_readwrite("staleness_horizon_s",
                       &model::ConvoyConfig::staleness_horizon_s)
        .def_readwrite("buffer_depth", &model::ConvoyConfig::buffer_depth)
        .def_readwrite("v_max_mps", &model::ConvoyConfig::v_max_mps);

    // ---- spacing policy -----------------------------------------------------
    py::class_<policy::TargetCommand>(m, "TargetCommand")
        .def_readonly("target_speed_mps", &policy::TargetCommand::target_speed_mps)
        .def_readonly("target_heading_rad",
                      &policy::TargetCommand::target_heading_rad)
        .def_readonly("valid", &policy::TargetCommand::valid)
        .def_readonly("goal", &policy::TargetCommand::goal);
    m.def("rx_gate_all_predecessor", &policy::rx_gate_all_predecessor, py::arg("ego"),
          py::arg("sender"));
    m.def("predecessor_goal_point", &policy::predecessor_goal_point,
          py::arg("predecessor"), py::arg("ego_index"), py::arg("pred_index"),
          py::arg("desired_gap_m"), py::arg("origin"));
    m.def("sigma_platooning_cost", &policy::sigma_platooning_cost, py::arg("speed_mps"),
          py::arg("heading_rad"), py::arg("snapshot"), py::arg("config"),
          py::arg("origin"), py::arg("dt_s"));
    m.def("solve_targets", &policy::solve_targets, py::arg("snapshot"),
          py::arg("config"), py::arg("origin"), py::arg("dt_s"));

    // ---- controllers --------------------------------------------------------
    py::class_<control::PdGains>(m, "PdGains")
        .def(py::init<>())
        .def_readwrite("kp", &control::PdGains::kp)
        .def_readwrite("kd_s", &control::PdGains::kd_s)
        .def_readwrite("v_max_mps", &control::PdGains::v_max_mps);
    py::class_<control::StanleyGains>(m, "StanleyGains")
        .def(py::init<>())
        .def_readwrite("k_cte", &control::StanleyGains::k_cte)
        .def_readwrite("softening_mps", &control::StanleyGains::softening_mps)
        .def_readwrite("max_steer_rad", &control::StanleyGains::max_steer_rad);
    m.def(
        "pd_speed_control",
        [](double target, const model::VehicleState& ego, const control::PdGains& g,
           double prev_error, double dt) {
            const auto r = control::pd_speed_control(target, ego, g, prev_error, dt);
            return py::make_tuple(r.applied_speed_mps, r.error_mps);
        },
        py::arg("target_speed_mps"), py::arg("ego"), py::arg("gains"),
        py::arg("prev_error_mps"), py::arg("dt_s"));
    m.def("stanley_heading_control", &control::stanley_heading_control,
          py::arg("target_heading_rad"), py::arg("goal"), py::arg("ego_position"),
          py::arg("ego"), py::arg("gains"));
    m.def("cross_track_error", &control::cross_track_error, py::arg("point"),
          py::arg("line_point"), py::arg("line_heading_rad"));

    // ---- wire codec and loss ------------------------------------------------
    m.def(
        "encode_bsm",
        [](const model::VehicleState& state) {
            const net::FrameBytes frame = net::encode_bsm(state);
            return py::bytes(reinterpret_cast<const char*>(frame.data()), frame.size());
        },
        py::arg("state"));
    m.def(
        "decode_bsm",
        [](const py::bytes& raw) {
            const std::string buffer = raw;
            const auto result = net::decode_bsm(std::span<const std::uint8_t>(
                reinterpret_cast<const std::uint8_t*>(buffer.data()), buffer.size()));
            if (const auto* error = std::get_if<net::DecodeError>(&result)) {
                const char* kind =
                    error->kind == net::DecodeError::Kind::foreign_frame
                        ? "foreign_frame"
                        : "malformed_frame";
                throw std::invalid_argument(std::string(kind) + ": " + error->detail);
            }
            return std::get<model::VehicleState>(result);
        },
        py::arg("frame"));
    m.attr("FRAME_SIZE") = static_cast<int>(net::kFrameSize);

    py::class_<net::LossGate>(m, "LossGate")
        .def(py::init([](double per, std::uint64_t seed) {
                 return net::LossGate(net::LossModel{per, seed});
             }),
             py::arg("per"), py::arg("seed"))
        .def("deliver", &net::LossGate::deliver);
    m.def("derive_stream_seed", &net::derive_stream_seed, py::arg("master_seed"),
          py::arg("stream_id"));

    // ---- plant ---------------------------------------------------------------
    py::class_<sim::PlantParams>(m, "PlantParams")
        .def(py::init<>())
        .def_readwrite("wheelbase_m", &sim::PlantParams::wheelbase_m)
        .def_readwrite("speed_lag_s", &sim::PlantParams::speed_lag_s)
        .def_readwrite("v_max_mps", &sim::PlantParams::v_max_mps)
        .def_readwrite("max_steer_rad", &sim::PlantParams::max_steer_rad);
    py::class_<sim::Pose>(m, "Pose")
        .def(py::init<>())
        .def_readwrite("position", &sim::Pose::position)
        .def_readwrite("heading_rad", &sim::Pose::heading_rad)
        .def_readwrite("speed_mps", &sim::Pose::speed_mps);
    py::class_<control::Actuation>(m, "Actuation")
        .def(py::init<double, double>(), py::arg("speed_mps"), py::arg("steer_rad"))
        .def_readwrite("speed_mps", &control::Actuation::speed_mps)
        .def_readwrite("steer_rad", &control::Actuation::steer_rad);
    m.def("bicycle_step", &sim::bicycle_step, py::arg("pose"), py::arg("command"),
          py::arg("params"), py::arg("dt_s"));

    // ---- scenario engine -------------------------------------------------------
    py::class_<sim::Trace>(m, "Trace")
        .def_readonly("vehicle_count", &sim::Trace::vehicle_count)
        .def("__len__", [](const sim::Trace& t) { return t.rows.size(); })
        .def("times_s", &trace_times)
        .def("gaps_m", &trace_gaps, py::arg("follower"))
        .def("speeds_mps", &trace_speeds, py::arg("vehicle"))
        .def("to_csv", &sim::trace_to_csv)
        .def_static("from_csv", [](const std::string& text) {
            std::istringstream in(text);
            return sim::read_trace_csv(in);
        });

    py::class_<sim::ReceiverStats>(m, "ReceiverStats")
        .def_readonly("sent_to", &sim::ReceiverStats::sent_to)
        .def_readonly("dropped_loss", &sim::ReceiverStats::dropped_loss)
        .def_readonly("foreign", &sim::ReceiverStats::foreign)
        .def_readonly("malformed", &sim::ReceiverStats::malformed)
        .def_readonly("rejected_gate", &sim::ReceiverStats::rejected_gate)
        .def_readonly("rejected_sequence", &sim::ReceiverStats::rejected_sequence)
        .def_readonly("delivered", &sim::ReceiverStats::delivered)
        .def("dropped_total", &sim::ReceiverStats::dropped_total);

    py::class_<sim::RunResult>(m, "RunResult")
        .def_readonly("trace", &sim::RunResult::trace)
        .def_readonly("receivers", &sim::RunResult::receivers);

    m.def(
        "run_scenario_json",
        [](const std::string& json_text) {
            return sim::run_scenario(sim::load_scenario_json(json_text, "<python>"));
        },
        py::arg("scenario_json"),
        "Run a scenario given its JSON text; returns a RunResult");
    m.def("paper_repro_scenario_json",
          []() { return std::string(sim::paper_repro_scenario_json()); });
    m.def(
        "validate_scenario_json",
        [](const std::string& json_text) {
            (void)sim::load_scenario_json(json_text, "<python>");
        },
        py::arg("scenario_json"));

    // ---- metrics -----------------------------------------------------------------
    py::class_<metrics::MetricSeries>(m, "MetricSeries")
        .def_readonly("times_s", &metrics::MetricSeries::times_s)
        .def_readonly("values", &metrics::MetricSeries::values)
        .def_readonly("label", &metrics::MetricSeries::label);
    m.def("platooning_error", &metrics::platooning_error, py::arg("trace"),
          py::arg("desired_gap_m"));
    m.def("percentile_95",
          py::overload_cast<const std::vector<double>&>(&metrics::percentile_95),
          py::arg("values"));
    m.def("speed_difference", &metrics::speed_difference, py::arg("trace"));
    py::class_<metrics::RunMetrics>(m, "RunMetrics")
        .def_readonly("p95_error_per_follower_m",
                      &metrics::RunMetrics::p95_error_per_follower_m)
        .def_readonly("worst_p95_error_m", &metrics::RunMetrics::worst_p95_error_m)
        .def_readonly("mean_speed_difference_mps",
                      &metrics::RunMetrics::mean_speed_difference_mps);
    m.def("run_metrics", &metrics::run_metrics, py::arg("trace"),
          py::arg("desired_gap_m"));
}
