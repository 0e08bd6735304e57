#include "openconvoy/sim/plant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "openconvoy/angles.hpp"

namespace openconvoy::sim {

void PlantParams::validate() const {
    if (!(wheelbase_m > 0.0)) throw std::invalid_argument("wheelbase_m must be > 0");
    if (!(speed_lag_s >= 0.0)) throw std::invalid_argument("speed_lag_s must be >= 0");
    if (!(v_max_mps > 0.0)) throw std::invalid_argument("v_max_mps must be > 0");
    if (!(max_steer_rad > 0.0 && max_steer_rad <= kPi / 2.0)) {
        throw std::invalid_argument("max_steer_rad must be in (0, pi/2]");
    }
}

Pose bicycle_step(const Pose& pose, const control::Actuation& command,
                  const PlantParams& params, double dt_s) {
    const double v_cmd = std::clamp(command.speed_mps, 0.0, params.v_max_mps);
    const double steer =
        std::clamp(command.steer_rad, -params.max_steer_rad, params.max_steer_rad);

    double speed = v_cmd;
    if (params.speed_lag_s > 0.0) {
        const double alpha = dt_s / std::max(params.speed_lag_s, dt_s);
        speed = pose.speed_mps + alpha * (v_cmd - pose.speed_mps);
    }

    const double heading = wrap_two_pi(
        pose.heading_rad + dt_s * speed * std::tan(steer) / params.wheelbase_m);

    return Pose{
        .position = geo::EnuPoint{
            .east_m = pose.position.east_m + dt_s * speed * std::sin(heading),
            .north_m = pose.position.north_m + dt_s * speed * std::cos(heading),
            .up_m = pose.position.up_m,
        },
        .heading_rad = heading,
        .speed_mps = speed,
    };
}

}  // namespace openconvoy::sim
