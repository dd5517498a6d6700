#include "uavbeam/geometry.hpp"

#include <stdexcept>

namespace uavbeam {

void SwarmLayout::validate() const {
    if (l_u < 1 || c_u < 1 || r_u < 1)
        throw std::invalid_argument("swarm layout: l_u, c_u, r_u must be positive integers");
    if (!(spacing_delta > 0.0) || !std::isfinite(spacing_delta))
        throw std::invalid_argument("swarm layout: spacing_delta must be > 0");
    if (!std::isfinite(origin.x) || !std::isfinite(origin.y) || !std::isfinite(origin.z))
        throw std::invalid_argument("swarm layout: origin must be finite");
}

double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    if (a > kPi) a -= 2.0 * kPi;
    return a;
}

std::vector<UavState> build_grid_layout(const SwarmLayout& layout) {
    layout.validate();
    std::vector<UavState> states;
    states.reserve(static_cast<size_t>(layout.count()));
    for (int k = 0; k < layout.r_u; ++k)
        for (int j = 0; j < layout.c_u; ++j)
            for (int i = 0; i < layout.l_u; ++i) {
                UavState s;
                s.position = layout.origin + layout.spacing_delta * Vec3{double(i), double(j), double(k)};
                states.push_back(s);
            }
    return states;
}

Direction direction_between(const Vec3& from, const Vec3& to) {
    const Vec3 d = to - from;
    const double len = norm(d);
    if (len == 0.0)
        throw std::invalid_argument("degenerate direction: coincident points");
    Direction dir;
    dir.phi = std::atan2(d.y, d.x);
    double c = d.z / len;
    if (c > 1.0) c = 1.0;
    if (c < -1.0) c = -1.0;
    dir.theta = std::acos(c);
    return dir;
}

Vec3 rotate_vector(const Vec3& v, const RotationAngles& angles) {
    const double cy = std::cos(angles.yaw), sy = std::sin(angles.yaw);
    const double cp = std::cos(angles.pitch), sp = std::sin(angles.pitch);
    const double cr = std::cos(angles.roll), sr = std::sin(angles.roll);
    // R = Rz(yaw) * Ry(pitch) * Rx(roll), expanded.
    const double r00 = cy * cp;
    const double r01 = cy * sp * sr - sy * cr;
    const double r02 = cy * sp * cr + sy * sr;
    const double r10 = sy * cp;
    const double r11 = sy * sp * sr + cy * cr;
    const double r12 = sy * sp * cr - cy * sr;
    const double r20 = -sp;
    const double r21 = cp * sr;
    const double r22 = cp * cr;
    return {r00 * v.x + r01 * v.y + r02 * v.z,
            r10 * v.x + r11 * v.y + r12 * v.z,
            r20 * v.x + r21 * v.y + r22 * v.z};
}

Vec3 unit_vector(const Direction& d) {
    const double st = std::sin(d.theta);
    return {std::cos(d.phi) * st, std::sin(d.phi) * st, std::cos(d.theta)};
}

Vec3 centroid(std::span<const UavState> states) {
    Vec3 c{};
    for (const auto& s : states) c = c + s.position;
    const double n = states.empty() ? 1.0 : double(states.size());
    return {c.x / n, c.y / n, c.z / n};
}

} // namespace uavbeam
