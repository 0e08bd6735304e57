#include "openconvoy/control.hpp"

#include <algorithm>
#include <cmath>

#include "openconvoy/angles.hpp"

namespace openconvoy::control {

SpeedControlResult pd_speed_control(double target_speed_mps,
                                    const model::VehicleState& ego,
                                    const PdGains& gains, double prev_error_mps,
                                    double dt_s) {
    const double error = target_speed_mps - ego.speed_mps;
    const double derivative = (error - prev_error_mps) / dt_s;
    const double raw = ego.speed_mps + gains.kp * error + gains.kd_s * derivative;
    return SpeedControlResult{
        .applied_speed_mps = std::clamp(raw, 0.0, gains.v_max_mps),
        .error_mps = error,
    };
}

double cross_track_error(const geo::EnuPoint& point, const geo::EnuPoint& line_point,
                         double line_heading_rad) {
    // Compass headings: direction unit vector is (sin h, cos h) in (east, north).
    const double ue = std::sin(line_heading_rad);
    const double un = std::cos(line_heading_rad);
    const double we = point.east_m - line_point.east_m;
    const double wn = point.north_m - line_point.north_m;
    return ue * wn - un * we;
}

double stanley_heading_control(double target_heading_rad, const geo::EnuPoint& goal,
                               const geo::EnuPoint& ego_position,
                               const model::VehicleState& ego,
                               const StanleyGains& gains) {
    const double heading_error = wrap_pi(target_heading_rad - ego.heading_rad);
    const double cte = cross_track_error(ego_position, goal, target_heading_rad);
    const double correction =
        std::atan(gains.k_cte * cte / (gains.softening_mps + ego.speed_mps));
    return std::clamp(heading_error + correction, -gains.max_steer_rad,
                      gains.max_steer_rad);
}

}  // namespace openconvoy::control
