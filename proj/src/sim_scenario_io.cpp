#include "openconvoy/sim/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "openconvoy/errors.hpp"

namespace openconvoy::sim {

namespace {

using nlohmann::json;

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

[[noreturn]] void field_error(const std::string& field, const std::string& message) {
    throw ConfigError("field '" + field + "': " + message, field);
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        field_error(key, e.what());
    }
}

geo::GeoPoint parse_geo(const json& j, const std::string& field) {
    geo::GeoPoint point;
    point.latitude_deg = get_or<double>(j, "latitude_deg", 0.0);
    point.longitude_deg = get_or<double>(j, "longitude_deg", 0.0);
    point.altitude_m = get_or<double>(j, "altitude_m", 0.0);
    if (!j.contains("latitude_deg") || !j.contains("longitude_deg")) {
        field_error(field, "needs latitude_deg and longitude_deg");
    }
    return point;
}

PlantParams parse_plant(const json& j, const PlantParams& base) {
    PlantParams plant = base;
    plant.wheelbase_m = get_or<double>(j, "wheelbase_m", plant.wheelbase_m);
    plant.speed_lag_s = get_or<double>(j, "speed_lag_s", plant.speed_lag_s);
    plant.v_max_mps = get_or<double>(j, "v_max_mps", plant.v_max_mps);
    plant.max_steer_rad = get_or<double>(j, "max_steer_rad", plant.max_steer_rad);
    return plant;
}

InitialPose parse_pose(const json& j, const geo::GeoPoint& origin,
                       const std::string& field) {
    InitialPose pose;
    if (j.contains("latitude_deg")) {
        pose.position = geo::enu_from_geodetic(origin, parse_geo(j, field));
    } else {
        pose.position.east_m = get_or<double>(j, "east_m", 0.0);
        pose.position.north_m = get_or<double>(j, "north_m", 0.0);
        pose.position.up_m = get_or<double>(j, "up_m", 0.0);
    }
    pose.heading_rad = get_or<double>(j, "heading_rad", 0.0);
    pose.speed_mps = get_or<double>(j, "speed_mps", 0.0);
    return pose;
}

const char* const kKnownKeys[] = {
    "name",          "vehicle_count",     "desired_gap_m",  "control_period_s",
    "broadcast_period_s", "staleness_horizon_s", "buffer_depth", "duration_s",
    "seed",          "v_max_mps",         "origin",         "leader_profile",
    "per",           "follower_per",      "gains",          "plant",
    "plants",        "policies",          "transport",      "multicast",
    "initial_poses",
};

}  // namespace

ScenarioConfig load_scenario_json(const std::string& text,
                                  const std::string& source_name) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(source_name + ":" +
                          std::to_string(line_of_offset(text, e.byte)) +
                          ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError(source_name + ": scenario must be an object");

    for (const auto& [key, _] : j.items()) {
        bool known = false;
        for (const char* candidate : kKnownKeys) {
            if (key == candidate) {
                known = true;
                break;
            }
        }
        if (!known) field_error(key, "unknown key");
    }

    ScenarioConfig config;
    config.name = get_or<std::string>(j, "name", config.name);
    config.convoy.vehicle_count =
        get_or<int>(j, "vehicle_count", config.convoy.vehicle_count);
    config.convoy.desired_gap_m =
        get_or<double>(j, "desired_gap_m", config.convoy.desired_gap_m);
    config.convoy.broadcast_period_s =
        get_or<double>(j, "broadcast_period_s", config.convoy.broadcast_period_s);
    config.convoy.staleness_horizon_s =
        get_or<double>(j, "staleness_horizon_s", config.convoy.staleness_horizon_s);
    config.convoy.buffer_depth = static_cast<std::size_t>(
        get_or<int>(j, "buffer_depth", static_cast<int>(config.convoy.buffer_depth)));
    config.convoy.v_max_mps = get_or<double>(j, "v_max_mps", config.convoy.v_max_mps);
    config.control_period_s =
        get_or<double>(j, "control_period_s", config.control_period_s);
    config.duration_s = get_or<double>(j, "duration_s", config.duration_s);
    config.seed = get_or<std::uint64_t>(j, "seed", config.seed);

    if (j.contains("origin")) config.origin = parse_geo(j.at("origin"), "origin");

    if (j.contains("leader_profile")) {
        config.leader_profile.clear();
        for (const json& step : j.at("leader_profile")) {
            if (!step.contains("until_s") || !step.contains("speed_mps")) {
                field_error("leader_profile", "steps need until_s and speed_mps");
            }
            config.leader_profile.push_back(LeaderProfileStep{
                step.at("until_s").get<double>(), step.at("speed_mps").get<double>()});
        }
    }

    if (j.contains("gains")) {
        const json& gains = j.at("gains");
        config.pd.kp = get_or<double>(gains, "kp", config.pd.kp);
        config.pd.kd_s = get_or<double>(gains, "kd_s", config.pd.kd_s);
        config.stanley.k_cte = get_or<double>(gains, "k_cte", config.stanley.k_cte);
        config.stanley.softening_mps =
            get_or<double>(gains, "softening_mps", config.stanley.softening_mps);
        config.stanley.max_steer_rad =
            get_or<double>(gains, "max_steer_rad", config.stanley.max_steer_rad);
    }
    config.pd.v_max_mps = config.convoy.v_max_mps;

    PlantParams base_plant;
    base_plant.v_max_mps = config.convoy.v_max_mps;
    base_plant.max_steer_rad = config.stanley.max_steer_rad;
    if (j.contains("plant")) base_plant = parse_plant(j.at("plant"), base_plant);
    config.plants = {base_plant};
    if (j.contains("plants")) {
        config.plants.clear();
        for (const json& plant : j.at("plants")) {
            config.plants.push_back(parse_plant(plant, base_plant));
        }
    }

    if (j.contains("follower_per")) {
        config.follower_per = j.at("follower_per").get<std::vector<double>>();
    } else {
        config.follower_per = {get_or<double>(j, "per", 0.0)};
    }

    if (j.contains("policies")) {
        const json& policies = j.at("policies");
        config.rx_gate_name =
            get_or<std::string>(policies, "rx_gate", config.rx_gate_name);
        config.tx_gate_name =
            get_or<std::string>(policies, "tx_gate", config.tx_gate_name);
        config.spacing_name =
            get_or<std::string>(policies, "spacing", config.spacing_name);
    }

    const std::string transport = get_or<std::string>(j, "transport", "virtual");
    if (transport == "virtual") {
        config.transport = TransportMode::virtual_clock;
    } else if (transport == "multicast") {
        config.transport = TransportMode::multicast;
    } else {
        field_error("transport", "must be 'virtual' or 'multicast'");
    }

    if (j.contains("multicast")) {
        const json& m = j.at("multicast");
        config.multicast.group = get_or<std::string>(m, "group", config.multicast.group);
        config.multicast.port = static_cast<std::uint16_t>(
            get_or<int>(m, "port", config.multicast.port));
        config.multicast.interface_name =
            get_or<std::string>(m, "interface", config.multicast.interface_name);
    }

    if (j.contains("initial_poses")) {
        for (const json& pose : j.at("initial_poses")) {
            config.initial_poses.push_back(
                parse_pose(pose, config.origin, "initial_poses"));
        }
    }

    config.validate();
    return config;
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_scenario_json(buffer.str(), path);
}

std::string scenario_to_json(const ScenarioConfig& config) {
    json j;
    j["name"] = config.name;
    j["vehicle_count"] = config.convoy.vehicle_count;
    j["desired_gap_m"] = config.convoy.desired_gap_m;
    j["control_period_s"] = config.control_period_s;
    j["broadcast_period_s"] = config.convoy.broadcast_period_s;
    j["staleness_horizon_s"] = config.convoy.staleness_horizon_s;
    j["buffer_depth"] = static_cast<int>(config.convoy.buffer_depth);
    j["duration_s"] = config.duration_s;
    j["seed"] = config.seed;
    j["v_max_mps"] = config.convoy.v_max_mps;
    j["origin"] = {{"latitude_deg", config.origin.latitude_deg},
                   {"longitude_deg", config.origin.longitude_deg},
                   {"altitude_m", config.origin.altitude_m}};
    j["leader_profile"] = json::array();
    for (const LeaderProfileStep& step : config.leader_profile) {
        j["leader_profile"].push_back(
            {{"until_s", step.until_s}, {"speed_mps", step.speed_mps}});
    }
    j["follower_per"] = config.follower_per;
    j["gains"] = {{"kp", config.pd.kp},
                  {"kd_s", config.pd.kd_s},
                  {"k_cte", config.stanley.k_cte},
                  {"softening_mps", config.stanley.softening_mps},
                  {"max_steer_rad", config.stanley.max_steer_rad}};
    j["plants"] = json::array();
    for (const PlantParams& plant : config.plants) {
        j["plants"].push_back({{"wheelbase_m", plant.wheelbase_m},
                               {"speed_lag_s", plant.speed_lag_s},
                               {"v_max_mps", plant.v_max_mps},
                               {"max_steer_rad", plant.max_steer_rad}});
    }
    j["policies"] = {{"rx_gate", config.rx_gate_name},
                     {"tx_gate", config.tx_gate_name},
                     {"spacing", config.spacing_name}};
    j["transport"] =
        config.transport == TransportMode::virtual_clock ? "virtual" : "multicast";
    j["multicast"] = {{"group", config.multicast.group},
                      {"port", config.multicast.port},
                      {"interface", config.multicast.interface_name}};
    if (!config.initial_poses.empty()) {
        j["initial_poses"] = json::array();
        for (const InitialPose& pose : config.initial_poses) {
            j["initial_poses"].push_back({{"east_m", pose.position.east_m},
                                          {"north_m", pose.position.north_m},
                                          {"up_m", pose.position.up_m},
                                          {"heading_rad", pose.heading_rad},
                                          {"speed_mps", pose.speed_mps}});
        }
    }
    return j.dump(2) + "\n";
}

const char* paper_repro_scenario_json() {
    return R"({
  "name": "paper-repro",
  "vehicle_count": 3,
  "desired_gap_m": 15.0,
  "control_period_s": 0.05,
  "broadcast_period_s": 0.1,
  "staleness_horizon_s": 0.3,
  "buffer_depth": 10,
  "duration_s": 180.0,
  "seed": 1,
  "v_max_mps": 3.0,
  "origin": {"latitude_deg": 28.6024, "longitude_deg": -81.2001, "altitude_m": 0.0},
  "leader_profile": [
    {"until_s": 60.0, "speed_mps": 1.0},
    {"until_s": 120.0, "speed_mps": 2.0},
    {"until_s": 180.0, "speed_mps": 1.0}
  ],
  "per": 0.0,
  "gains": {"kp": 0.8, "kd_s": 0.1, "k_cte": 1.0, "softening_mps": 0.1, "max_steer_rad": 0.35},
  "plant": {"wheelbase_m": 0.3, "speed_lag_s": 0.25, "v_max_mps": 3.0, "max_steer_rad": 0.35},
  "policies": {"rx_gate": "all_predecessor", "tx_gate": "tx_always", "spacing": "platooning"},
  "transport": "virtual"
}
)";
}

ScenarioConfig paper_repro_scenario() {
    return load_scenario_json(paper_repro_scenario_json(), "<paper-repro>");
}

}  // namespace openconvoy::sim
