#include "openconvoy/geo.hpp"

#include <cmath>
#include <string>

#include "openconvoy/angles.hpp"

namespace openconvoy::geo {

void validate(const GeoPoint& point) {
    if (!std::isfinite(point.latitude_deg) || point.latitude_deg < -90.0 ||
        point.latitude_deg > 90.0) {
        throw std::invalid_argument("latitude out of range [-90, 90]: " +
                                    std::to_string(point.latitude_deg));
    }
    if (!std::isfinite(point.longitude_deg) || point.longitude_deg < -180.0 ||
        point.longitude_deg > 180.0) {
        throw std::invalid_argument("longitude out of range [-180, 180]: " +
                                    std::to_string(point.longitude_deg));
    }
    if (!std::isfinite(point.altitude_m)) {
        throw std::invalid_argument("altitude must be finite");
    }
}

double meridional_radius(double latitude_rad) {
    const double s = std::sin(latitude_rad);
    const double den = 1.0 - kWgs84EccentricitySq * s * s;
    return kWgs84SemiMajorAxisM * (1.0 - kWgs84EccentricitySq) / (den * std::sqrt(den));
}

double prime_vertical_radius(double latitude_rad) {
    const double s = std::sin(latitude_rad);
    return kWgs84SemiMajorAxisM / std::sqrt(1.0 - kWgs84EccentricitySq * s * s);
}

EnuPoint enu_from_geodetic(const GeoPoint& reference, const GeoPoint& point) {
    validate(reference);
    validate(point);
    const double lat_ref = deg_to_rad(reference.latitude_deg);
    const double r_north = meridional_radius(lat_ref) + reference.altitude_m;
    const double r_east = (prime_vertical_radius(lat_ref) + reference.altitude_m) *
                          std::cos(lat_ref);
    return EnuPoint{
        .east_m = deg_to_rad(point.longitude_deg - reference.longitude_deg) * r_east,
        .north_m = deg_to_rad(point.latitude_deg - reference.latitude_deg) * r_north,
        .up_m = point.altitude_m - reference.altitude_m,
    };
}

GeoPoint geodetic_from_enu(const GeoPoint& reference, const EnuPoint& offset) {
    validate(reference);
    const double lat_ref = deg_to_rad(reference.latitude_deg);
    const double r_north = meridional_radius(lat_ref) + reference.altitude_m;
    const double r_east = (prime_vertical_radius(lat_ref) + reference.altitude_m) *
                          std::cos(lat_ref);
    if (std::abs(r_east) < 1.0 && offset.east_m != 0.0) {
        throw std::invalid_argument("east offset undefined at the pole");
    }
    return GeoPoint{
        .latitude_deg = reference.latitude_deg + rad_to_deg(offset.north_m / r_north),
        .longitude_deg = reference.longitude_deg + rad_to_deg(offset.east_m / r_east),
        .altitude_m = reference.altitude_m + offset.up_m,
    };
}

double bearing_enu(const EnuPoint& from, const EnuPoint& to) {
    const double de = to.east_m - from.east_m;
    const double dn = to.north_m - from.north_m;
    if (de == 0.0 && dn == 0.0) {
        throw std::domain_error("bearing undefined for horizontally coincident points");
    }
    return wrap_two_pi(std::atan2(de, dn));
}

double horizontal_distance(const EnuPoint& a, const EnuPoint& b) {
    return std::hypot(b.east_m - a.east_m, b.north_m - a.north_m);
}

}  // namespace openconvoy::geo
