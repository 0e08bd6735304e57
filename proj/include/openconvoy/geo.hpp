#pragma once

#include <stdexcept>

namespace openconvoy::geo {

/// WGS84 geodetic coordinate, the position component of a broadcast state.
struct GeoPoint {
    double latitude_deg = 0.0;   // [-90, 90]
    double longitude_deg = 0.0;  // [-180, 180]
    double altitude_m = 0.0;     // above ellipsoid
};

/// Local East-North-Up offset from a reference point, in meters.
struct EnuPoint {
    double east_m = 0.0;
    double north_m = 0.0;
    double up_m = 0.0;
};

/// Throws std::invalid_argument when latitude/longitude are out of range or
/// any component is non-finite.
void validate(const GeoPoint& point);

/// East/North/Up offset of `point` relative to `reference` on the tangent
/// plane at `reference`. Uses the WGS84 radii of curvature (meridional for
/// north, prime-vertical for east), so enu_from_geodetic(r, r) is exactly
/// (0, 0, 0). Intended for convoy-scale offsets (well under 50 km).
EnuPoint enu_from_geodetic(const GeoPoint& reference, const GeoPoint& point);

/// Inverse of enu_from_geodetic on the same tangent plane.
GeoPoint geodetic_from_enu(const GeoPoint& reference, const EnuPoint& offset);

/// Compass bearing from `from` to `to` in the horizontal plane:
/// radians in [0, 2*pi), 0 = due north, clockwise positive.
/// Throws std::domain_error when the points coincide horizontally.
double bearing_enu(const EnuPoint& from, const EnuPoint& to);

/// Horizontal (east/north) distance between two ENU points.
double horizontal_distance(const EnuPoint& a, const EnuPoint& b);

// WGS84 ellipsoid.
inline constexpr double kWgs84SemiMajorAxisM = 6378137.0;
inline constexpr double kWgs84Flattening = 1.0 / 298.257223563;
inline constexpr double kWgs84EccentricitySq = kWgs84Flattening * (2.0 - kWgs84Flattening);

/// Meridional (north-south) radius of curvature at a latitude, meters.
double meridional_radius(double latitude_rad);

/// Prime-vertical (east-west) radius of curvature at a latitude, meters.
double prime_vertical_radius(double latitude_rad);

}  // namespace openconvoy::geo
