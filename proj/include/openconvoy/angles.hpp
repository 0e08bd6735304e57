#pragma once

#include <cmath>
#include <numbers>

namespace openconvoy {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

/// Wrap an angle to [0, 2*pi).
inline double wrap_two_pi(double angle_rad) {
    double x = std::fmod(angle_rad, kTwoPi);
    if (x < 0.0) x += kTwoPi;
    if (x >= kTwoPi) x = 0.0;  // fmod rounding can land exactly on 2*pi
    return x;
}

/// Wrap an angle to (-pi, pi]. All heading arithmetic goes through here
/// before differences are fed to a controller.
inline double wrap_pi(double angle_rad) {
    double x = wrap_two_pi(angle_rad);
    return x > kPi ? x - kTwoPi : x;
}

}  // namespace openconvoy
