#pragma once

#include <optional>
#include <span>
#include <vector>

#include "uavbeam/geometry.hpp"
#include "uavbeam/rng.hpp"

namespace uavbeam {

/// Hovering tolerance: half-widths of the uniform displacement noise per
/// axis (meters) and of the rotational jitter (radians, shared by yaw, pitch
/// and roll). When tolerance_fraction is set it expresses the displacement
/// bounds as a fraction of the swarm spacing; call resolved() to apply it.
struct HoverSpec {
    double dx_max = 0.0;
    double dy_max = 0.0;
    double dz_max = 0.0;
    double angle_max = 0.0;
    std::optional<double> tolerance_fraction;

    void validate() const;
    /// Returns a copy with tolerance_fraction folded into absolute bounds.
    HoverSpec resolved(double spacing_delta) const;
};

/// One draw of hovering noise for a single UAV.
struct Perturbation {
    Vec3 displacement{};
    RotationAngles rotation{};
};

/// Independent per-axis Uniform(-bound, +bound) displacement and rotation.
/// Every component satisfies |value| <= bound exactly.
Perturbation sample_perturbation(const HoverSpec& spec, Rng& rng);

std::vector<Perturbation> sample_perturbations(const HoverSpec& spec, size_t n, Rng& rng);

/// Adds each perturbation to the matching state: position += displacement,
/// rotation += rotation noise (wrapped to (-pi, pi]). Powers and phases pass
/// through unchanged. Throws on length mismatch.
std::vector<UavState> apply_hover(std::span<const UavState> states,
                                  std::span<const Perturbation> perturbations);

} // namespace uavbeam
