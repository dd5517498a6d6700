#pragma once

#include <memory>
#include <span>
#include <vector>

#include "uavbeam/beampattern.hpp"
#include "uavbeam/dqn/learning.hpp"
#include "uavbeam/geometry.hpp"
#include "uavbeam/hover.hpp"
#include "uavbeam/rng.hpp"

namespace uavbeam::dqn {

/// Physics of one beam re-forming task: the K selected UAVs at their nominal
/// states, the beamforming weights in force, the receiver, and the
/// distortion quadrature grid. spacing_delta only scales the state-vector
/// residual normalization.
struct ReformScenario {
    std::vector<UavState> subset;
    BeamWeights weights;
    Vec3 receiver{};
    double wavelength = 0.085655;
    double spacing_delta = 1.0;
    HoverSpec hover;
    AngularGrid grid;
    ElementPattern element;
};

struct StepResult {
    std::vector<double> state;
    double reward = 0.0;
    bool done = false;     // threshold met or step budget exhausted
    bool terminal = false; // threshold met
    double eta_before = 0.0;
    double eta_after = 0.0;
};

/// Discrete correction environment. Actions decode as
///   action = uav * 8 + control * 2 + sign_bit
/// with control 0..3 = {x, y, z, phase} and sign_bit 0 = +step, 1 = -step.
/// The state vector is, per UAV, the residual displacement (3 components,
/// divided by spacing_delta) and residual rotation (3 components, divided by
/// angle_max), followed by the current distortion eta; dimension 6K + 1.
/// Rewards are eta_before - eta_after plus a +1 bonus on reaching the
/// threshold.
class ReformEnv {
  public:
    ReformEnv(ReformScenario scenario, double eta_threshold, double position_step,
              double phase_step, size_t max_steps);

    size_t state_dim() const { return 6 * k_ + 1; }
    size_t num_actions() const { return 8 * k_; }

    /// Starts an episode with the given per-UAV hover draw. May return an
    /// already-done state when the initial distortion is under the threshold.
    std::vector<double> reset(std::span<const Perturbation> perturbations);

    StepResult step(int action); // throws on invalid action or finished episode

    const std::vector<double>& state() const { return state_; }
    bool done() const { return done_; }
    double eta() const { return eta_; }
    double initial_eta() const { return initial_eta_; }
    double eta_threshold() const { return eta_threshold_; }
    size_t steps_taken() const { return steps_; }
    /// Current corrected states (perturbed + accumulated corrections, with
    /// phase corrections folded into the state phases).
    std::vector<UavState> corrected_states() const;

    const ReformScenario& scenario() const { return scenario_; }

  private:
    void refresh_row(size_t k);
    double compute_eta() const;
    void rebuild_state();

    ReformScenario scenario_;
    double eta_threshold_;
    double position_step_;
    double phase_step_;
    size_t max_steps_;
    size_t k_;

    std::unique_ptr<DistortionEvaluator> evaluator_;

    std::vector<Perturbation> perturbations_;
    std::vector<Vec3> correction_pos_;
    std::vector<double> correction_phase_;
    std::vector<Vec3> boresights_; // rotated once per episode
    std::vector<double> term_re_;  // [k * cells + i]
    std::vector<double> term_im_;
    std::vector<double> state_;
    double eta_ = 0.0;
    double initial_eta_ = 0.0;
    size_t steps_ = 0;
    bool done_ = true;
    bool episode_active_ = false;
};

/// Threshold calibration: draws hover perturbations, evaluates the raw
/// (uncorrected) distortion eta of each, sorts ascending and returns the
/// requested quantile (order statistic floor(quantile * n), clamped).
double calibrate_threshold(const ReformScenario& scenario, size_t num_probe_draws,
                           double quantile, Rng& rng);

} // namespace uavbeam::dqn
