#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "uavbeam/geometry.hpp"

namespace uavbeam {

/// Per-UAV beamforming amplitudes w_k (>= 0) and phases zeta_k (radians).
/// State phases and weight phases add inside the pattern sum.
struct BeamWeights {
    std::vector<double> amplitudes;
    std::vector<double> phases;

    static BeamWeights uniform(size_t k);
    static BeamWeights from_mrt(std::span<const std::complex<double>> w);
    size_t size() const { return amplitudes.size(); }
    void validate() const;
};

/// Angular integration/sweep grid. uniform(n, m) places midpoints of an
/// n x m cell partition of [-pi, pi]^2, the quadrature layout the distortion
/// objective expects.
struct AngularGrid {
    std::vector<double> thetas;
    std::vector<double> phis;

    static AngularGrid uniform(size_t n_theta, size_t n_phi);
    double theta_step() const;
    double phi_step() const;
    void validate() const;
};

struct PatternSample {
    Direction direction{};
    double magnitude = 0.0; // |sum|
    double phase = 0.0;     // arg(sum) before the modulus
};

/// Cosine-power element pattern: gain = max(0, cos alpha)^q where alpha is
/// the angle between the UAV's rotated boresight and the evaluation
/// direction. q = 0 is an isotropic element (gain 1 everywhere).
struct ElementPattern {
    double exponent_q = 0.0;
    Vec3 boresight_body{0.0, 0.0, 1.0};

    double gain(const RotationAngles& rotation, const Vec3& dir_unit) const;
};

/// Far-field pattern sum at direction d:
///   S = sum_k P_k w_k g_k(d) exp[j(zeta_k + phi_k + (2pi/lambda) r_k . u(d))]
/// with u(d) = (cos phi sin theta, sin phi sin theta, cos theta).
PatternSample array_factor(std::span<const UavState> uavs, const BeamWeights& weights,
                           const Direction& d, double wavelength,
                           const ElementPattern& element = {});

/// Phase-conjugate steering toward the receiver: zeta_k = -(2pi/lambda)
/// (r_k . u) mod 2pi with u the unit vector from the swarm centroid to the
/// receiver. With these phases the pattern sum is coherent at that direction.
std::vector<double> steering_phases(std::span<const UavState> uavs, const Vec3& receiver,
                                    double wavelength);

/// Pattern sum with hatted quantities: positions/rotations from the
/// perturbed states, per-UAV phase errors added to the phases, and the
/// evaluation direction offset by (dtheta, dphi). phase_error may be empty.
PatternSample distorted_array_factor(std::span<const UavState> nominal,
                                     std::span<const UavState> perturbed,
                                     const BeamWeights& weights, const Direction& d,
                                     double dtheta, double dphi,
                                     std::span<const double> phase_error, double wavelength,
                                     const ElementPattern& element = {});

/// Beam distortion objective: J = (1/4) sum_cells (|B| - |Bhat|)^2 dtheta dphi,
/// a midpoint-rule quadrature over the grid of the squared magnitude mismatch
/// between the nominal and perturbed patterns.
double distortion_objective(std::span<const UavState> nominal,
                            std::span<const UavState> perturbed, const BeamWeights& weights,
                            std::span<const double> phase_error, const AngularGrid& grid,
                            double wavelength, const ElementPattern& element = {});

/// (1/4) sum_cells |B|^2 dtheta dphi of the nominal pattern; the
/// normalizer that makes eta = J / energy dimensionless.
double pattern_energy(std::span<const UavState> uavs, const BeamWeights& weights,
                      const AngularGrid& grid, double wavelength,
                      const ElementPattern& element = {});

/// Theta sweep at fixed phi; magnitudes are normalized by the sweep maximum.
std::vector<PatternSample> aoa_sweep(std::span<const UavState> uavs, const BeamWeights& weights,
                                     double phi_fixed, std::span<const double> theta_grid,
                                     double wavelength, const ElementPattern& element = {});

struct PowerPhaseCell {
    double power_db = 0.0; // 20 log10 |B| toward the receiver
    double phase_rad = 0.0;
};

/// Received power/phase toward the receiver as one common (pitch, roll)
/// rotation (yaw 0) is applied to every UAV. Rows follow pitch_grid, columns
/// roll_grid.
std::vector<std::vector<PowerPhaseCell>> hover_power_phase_map(
    std::span<const UavState> uavs, const BeamWeights& weights, const Vec3& receiver,
    std::span<const double> pitch_grid, std::span<const double> roll_grid, double wavelength,
    const ElementPattern& element);

/// Precomputed repeated evaluator for the distortion objective of one
/// nominal scenario: caches the grid unit vectors and the nominal pattern so
/// each call only evaluates the perturbed side. Callers that mutate one UAV
/// at a time can hold the per-UAV term rows themselves (layout
/// [k * cells() + cell]) and refresh single rows via fill_element_row; all
/// pattern arithmetic funnels through the same compiled kernels, so a
/// perturbed side with bitwise-nominal inputs reproduces the cached nominal
/// values exactly.
class DistortionEvaluator {
  public:
    DistortionEvaluator(std::span<const UavState> nominal, const BeamWeights& weights,
                        const AngularGrid& grid, double wavelength,
                        const ElementPattern& element = {});

    double objective(std::span<const UavState> perturbed,
                     std::span<const double> phase_error) const;
    double eta(std::span<const UavState> perturbed, std::span<const double> phase_error) const;
    double ideal_energy() const { return energy_; }

    /// Complex pattern terms of one UAV across every grid cell.
    /// boresight_rotated is the element boresight already rotated into the
    /// world frame; extra_phase adds to the state/weight phases.
    void fill_element_row(const UavState& state, size_t k, const Vec3& boresight_rotated,
                          double extra_phase, double* re, double* im) const;
    /// J of a full term-row cache against the cached nominal pattern.
    double objective_from_rows(std::span<const double> rows_re,
                               std::span<const double> rows_im) const;
    double eta_from_rows(std::span<const double> rows_re, std::span<const double> rows_im) const;

    size_t uav_count() const { return nominal_.size(); }
    size_t cells() const { return units_.size(); }
    std::span<const Vec3> cell_units() const { return units_; }
    std::span<const double> nominal_magnitudes() const { return nominal_mag_; }
    double cell_area() const { return cell_area_; }
    double wavenumber() const { return wavenumber_; }
    const ElementPattern& element() const { return element_; }

  private:
    void fill_rows(std::span<const UavState> states, std::span<const double> phase_error,
                   std::vector<double>& rows_re, std::vector<double>& rows_im) const;
    void magnitudes_from_rows(std::span<const double> rows_re, std::span<const double> rows_im,
                              std::span<double> out) const;

    std::vector<UavState> nominal_;
    BeamWeights weights_;
    ElementPattern element_;
    double wavenumber_;
    double cell_area_;
    std::vector<Vec3> units_;
    std::vector<double> nominal_mag_;
    double energy_;
};

} // namespace uavbeam
