#include "uavbeam/hover.hpp"

#include <stdexcept>

namespace uavbeam {

void HoverSpec::validate() const {
    if (dx_max < 0.0 || dy_max < 0.0 || dz_max < 0.0)
        throw std::invalid_argument("hover spec: displacement bounds must be >= 0");
    if (angle_max < 0.0)
        throw std::invalid_argument("hover spec: angle_max must be >= 0");
    if (tolerance_fraction && (*tolerance_fraction < 0.0 || *tolerance_fraction > 1.0))
        throw std::invalid_argument("hover spec: tolerance_fraction must be in [0, 1]");
}

HoverSpec HoverSpec::resolved(double spacing_delta) const {
    validate();
    HoverSpec out = *this;
    if (tolerance_fraction) {
        const double d = *tolerance_fraction * spacing_delta;
        out.dx_max = d;
        out.dy_max = d;
        out.dz_max = d;
        out.tolerance_fraction.reset();
    }
    return out;
}

Perturbation sample_perturbation(const HoverSpec& spec, Rng& rng) {
    Perturbation p;
    p.displacement.x = rng.uniform(-spec.dx_max, spec.dx_max);
    p.displacement.y = rng.uniform(-spec.dy_max, spec.dy_max);
    p.displacement.z = rng.uniform(-spec.dz_max, spec.dz_max);
    p.rotation.yaw = rng.uniform(-spec.angle_max, spec.angle_max);
    p.rotation.pitch = rng.uniform(-spec.angle_max, spec.angle_max);
    p.rotation.roll = rng.uniform(-spec.angle_max, spec.angle_max);
    return p;
}

std::vector<Perturbation> sample_perturbations(const HoverSpec& spec, size_t n, Rng& rng) {
    std::vector<Perturbation> out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) out.push_back(sample_perturbation(spec, rng));
    return out;
}

std::vector<UavState> apply_hover(std::span<const UavState> states,
                                  std::span<const Perturbation> perturbations) {
    if (states.size() != perturbations.size())
        throw std::invalid_argument("apply_hover: states and perturbations length mismatch");
    std::vector<UavState> out(states.begin(), states.end());
    for (size_t i = 0; i < out.size(); ++i) {
        out[i].position = out[i].position + perturbations[i].displacement;
        RotationAngles r = out[i].rotation + perturbations[i].rotation;
        out[i].rotation = {wrap_angle(r.yaw), wrap_angle(r.pitch), wrap_angle(r.roll)};
    }
    return out;
}

} // namespace uavbeam
