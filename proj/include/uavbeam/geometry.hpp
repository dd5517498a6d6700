#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace uavbeam {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 299792458.0; // m/s

/// 3D point/vector in meters.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
inline bool operator==(const Vec3& a, const Vec3& b) { return a.x == b.x && a.y == b.y && a.z == b.z; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(b - a); }

/// Propagation direction: theta is the polar (elevation) angle measured from
/// +Z, phi the azimuth measured from +X in the XY plane. Both in radians.
struct Direction {
    double theta = 0.0;
    double phi = 0.0;
};

/// Body attitude as intrinsic Z-Y-X Euler angles (yaw about Z, then pitch
/// about Y, then roll about X), radians.
struct RotationAngles {
    double yaw = 0.0;
    double pitch = 0.0;
    double roll = 0.0;
};

inline RotationAngles operator+(const RotationAngles& a, const RotationAngles& b) {
    return {a.yaw + b.yaw, a.pitch + b.pitch, a.roll + b.roll};
}

/// Rectangular 3D swarm grid: l_u x c_u x r_u elements spaced spacing_delta
/// meters apart along X, Y, Z starting at origin.
struct SwarmLayout {
    int l_u = 1;
    int c_u = 1;
    int r_u = 1;
    double spacing_delta = 1.0;
    Vec3 origin{};

    int count() const { return l_u * c_u * r_u; }
    void validate() const; // throws std::invalid_argument naming the bad field
};

/// One transmitting drone: position, attitude, transmit power (linear watts)
/// and carrier phase offset (radians).
struct UavState {
    Vec3 position{};
    RotationAngles rotation{};
    double power = 1.0;
    double phase = 0.0;
};

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

/// Builds the grid row-major with X varying fastest, then Y, then Z.
/// Element i sits at origin + spacing_delta * (i % l_u, (i / l_u) % c_u, i / (l_u*c_u)),
/// zero rotation, unit power, zero phase. Deterministic.
std::vector<UavState> build_grid_layout(const SwarmLayout& layout);

/// Direction of the ray from -> to: phi = atan2(dy, dx), theta = acos(dz/|d|).
/// Throws std::invalid_argument("degenerate direction") on coincident points.
Direction direction_between(const Vec3& from, const Vec3& to);

/// Applies the intrinsic Z-Y-X rotation R = Rz(yaw) * Ry(pitch) * Rx(roll).
Vec3 rotate_vector(const Vec3& v, const RotationAngles& angles);

/// Unit vector (cos phi sin theta, sin phi sin theta, cos theta).
Vec3 unit_vector(const Direction& d);

/// Arithmetic mean of the positions.
Vec3 centroid(std::span<const UavState> states);

} // namespace uavbeam
