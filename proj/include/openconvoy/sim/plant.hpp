#pragma once

#include "openconvoy/control.hpp"
#include "openconvoy/geo.hpp"

namespace openconvoy::sim {

/// Kinematic bicycle plant with a first-order lag on commanded speed.
struct PlantParams {
    double wheelbase_m = 0.3;     // small-scale chassis
    double speed_lag_s = 0.25;    // 0 = speed command applied instantly
    double v_max_mps = 3.0;
    double max_steer_rad = 0.35;

    void validate() const;
};

struct Pose {
    geo::EnuPoint position;
    double heading_rad = 0.0;  // [0, 2*pi), 0 = north, clockwise positive
    double speed_mps = 0.0;
};

/// One fixed-step plant update:
///   speed'   = speed + (dt / max(tau, dt)) * (v_a - speed)   (tau > 0)
///            = v_a                                           (tau = 0)
///   heading' = wrap(heading + dt * speed' * tan(steer) / wheelbase)
///   position advanced dt * speed' along heading' (east = sin, north = cos)
Pose bicycle_step(const Pose& pose, const control::Actuation& command,
                  const PlantParams& params, double dt_s);

}  // namespace openconvoy::sim
