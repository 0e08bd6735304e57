#pragma once

#include "openconvoy/geo.hpp"
#include "openconvoy/model.hpp"

namespace openconvoy::control {

struct PdGains {
    double kp = 0.8;          // dimensionless
    double kd_s = 0.1;        // seconds
    double v_max_mps = 3.0;   // output clamp [0, v_max]
};

struct StanleyGains {
    double k_cte = 1.0;           // 1/s, cross-track gain
    double softening_mps = 0.1;   // keeps the arctan term sane near standstill
    double max_steer_rad = 0.35;  // steering clamp
};

/// Command pair actually sent to the plant.
struct Actuation {
    double speed_mps = 0.0;  // within [0, v_max]
    double steer_rad = 0.0;  // within [-max_steer, max_steer]
};

struct SpeedControlResult {
    double applied_speed_mps = 0.0;
    double error_mps = 0.0;  // feed back as prev_error on the next step
};

/// Velocity-form PD on speed error. The output is a speed setpoint, not a
/// force: e = v_t - v, v_a = clamp(v + kp*e + kd*(e - prev_error)/dt, 0, v_max).
SpeedControlResult pd_speed_control(double target_speed_mps,
                                    const model::VehicleState& ego,
                                    const PdGains& gains, double prev_error_mps,
                                    double dt_s);

/// Stanley steering law. Heading error is wrapped to (-pi, pi]; the
/// cross-track error is the signed lateral offset of the ego from the line
/// through `goal` along `target_heading` (positive when the ego sits left of
/// the line), and the result is clamped to +/- max_steer.
double stanley_heading_control(double target_heading_rad, const geo::EnuPoint& goal,
                               const geo::EnuPoint& ego_position,
                               const model::VehicleState& ego,
                               const StanleyGains& gains);

/// Signed lateral offset of `point` from the line through `line_point` along
/// `line_heading`; positive when `point` lies left of the line direction.
double cross_track_error(const geo::EnuPoint& point, const geo::EnuPoint& line_point,
                         double line_heading_rad);

}  // namespace openconvoy::control
