#include "uavbeam/dqn/reform_env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uavbeam::dqn {

namespace {

double pow_clamped(double c, double q) {
    if (c <= 0.0) return 0.0;
    if (q == 1.0) return c;
    if (q == 2.0) return c * c;
    return std::pow(c, q);
}

} // namespace

ReformEnv::ReformEnv(ReformScenario scenario, double eta_threshold, double position_step,
                     double phase_step, size_t max_steps)
    : scenario_(std::move(scenario)), eta_threshold_(eta_threshold),
      position_step_(position_step), phase_step_(phase_step), max_steps_(max_steps),
      k_(scenario_.subset.size()) {
    if (k_ == 0)
        throw std::invalid_argument("reform env: empty UAV subset");
    if (!(eta_threshold_ >= 0.0))
        throw std::invalid_argument("reform env: eta threshold must be >= 0");
    if (!(position_step_ > 0.0) || !(phase_step_ > 0.0))
        throw std::invalid_argument("reform env: step sizes must be > 0");
    evaluator_ = std::make_unique<DistortionEvaluator>(scenario_.subset, scenario_.weights,
                                                       scenario_.grid, scenario_.wavelength,
                                                       scenario_.element);
    term_re_.assign(k_ * evaluator_->cells(), 0.0);
    term_im_.assign(k_ * evaluator_->cells(), 0.0);
}

std::vector<double> ReformEnv::reset(std::span<const Perturbation> perturbations) {
    if (perturbations.size() != k_)
        throw std::invalid_argument("reform env: perturbation count mismatch");
    perturbations_.assign(perturbations.begin(), perturbations.end());
    correction_pos_.assign(k_, Vec3{});
    correction_phase_.assign(k_, 0.0);
    boresights_.resize(k_);
    for (size_t k = 0; k < k_; ++k) {
        const RotationAngles rot = scenario_.subset[k].rotation + perturbations_[k].rotation;
        boresights_[k] = rotate_vector(scenario_.element.boresight_body, rot);
    }
    for (size_t k = 0; k < k_; ++k) refresh_row(k);
    eta_ = compute_eta();
    initial_eta_ = eta_;
    steps_ = 0;
    done_ = eta_ <= eta_threshold_;
    episode_active_ = !done_;
    rebuild_state();
    return state_;
}

void ReformEnv::refresh_row(size_t k) {
    UavState st = scenario_.subset[k];
    // Small terms first so an exact inverse correction restores the nominal
    // position bitwise; the evaluator then reproduces its cached nominal
    // values exactly.
    st.position = st.position + (perturbations_[k].displacement + correction_pos_[k]);
    const size_t cells = evaluator_->cells();
    evaluator_->fill_element_row(st, k, boresights_[k], correction_phase_[k],
                                 term_re_.data() + k * cells, term_im_.data() + k * cells);
}

double ReformEnv::compute_eta() const {
    return evaluator_->eta_from_rows(term_re_, term_im_);
}

void ReformEnv::rebuild_state() {
    state_.assign(state_dim(), 0.0);
    const double inv_delta = 1.0 / scenario_.spacing_delta;
    const double angle_max = scenario_.hover.angle_max;
    const double inv_angle = angle_max > 0.0 ? 1.0 / angle_max : 0.0;
    for (size_t k = 0; k < k_; ++k) {
        const Vec3 resid = perturbations_[k].displacement + correction_pos_[k];
        state_[6 * k + 0] = resid.x * inv_delta;
        state_[6 * k + 1] = resid.y * inv_delta;
        state_[6 * k + 2] = resid.z * inv_delta;
        state_[6 * k + 3] = perturbations_[k].rotation.yaw * inv_angle;
        state_[6 * k + 4] = perturbations_[k].rotation.pitch * inv_angle;
        state_[6 * k + 5] = perturbations_[k].rotation.roll * inv_angle;
    }
    state_[6 * k_] = eta_;
}

StepResult ReformEnv::step(int action) {
    if (!episode_active_ || done_)
        throw std::logic_error("reform env: step on a finished episode");
    if (action < 0 || size_t(action) >= num_actions())
        throw std::invalid_argument("reform env: invalid action index");
    const size_t k = size_t(action) / 8;
    const int rem = action % 8;
    const int control = rem / 2;
    const double sign = (rem % 2 == 0) ? 1.0 : -1.0;

    switch (control) {
    case 0: correction_pos_[k].x += sign * position_step_; break;
    case 1: correction_pos_[k].y += sign * position_step_; break;
    case 2: correction_pos_[k].z += sign * position_step_; break;
    default: correction_phase_[k] += sign * phase_step_; break;
    }
    refresh_row(k);

    const double eta_before = eta_;
    eta_ = compute_eta();
    ++steps_;

    StepResult result;
    result.eta_before = eta_before;
    result.eta_after = eta_;
    result.terminal = eta_ <= eta_threshold_;
    result.reward = eta_before - eta_;
    if (result.terminal) result.reward += 1.0;
    done_ = result.terminal || steps_ >= max_steps_;
    result.done = done_;
    rebuild_state();
    result.state = state_;
    return result;
}

std::vector<UavState> ReformEnv::corrected_states() const {
    std::vector<UavState> out(scenario_.subset.begin(), scenario_.subset.end());
    for (size_t k = 0; k < k_; ++k) {
        out[k].position = out[k].position + (perturbations_[k].displacement + correction_pos_[k]);
        const RotationAngles r = out[k].rotation + perturbations_[k].rotation;
        out[k].rotation = {wrap_angle(r.yaw), wrap_angle(r.pitch), wrap_angle(r.roll)};
        out[k].phase += correction_phase_[k];
    }
    return out;
}

double calibrate_threshold(const ReformScenario& scenario, size_t num_probe_draws,
                           double quantile, Rng& rng) {
    if (num_probe_draws < 2)
        throw std::invalid_argument("calibrate_threshold: need at least 2 probe draws");
    if (!(quantile > 0.0) || !(quantile < 1.0))
        throw std::invalid_argument("calibrate_threshold: quantile must be in (0, 1)");
    DistortionEvaluator evaluator(scenario.subset, scenario.weights, scenario.grid,
                                  scenario.wavelength, scenario.element);
    std::vector<double> etas;
    etas.reserve(num_probe_draws);
    for (size_t p = 0; p < num_probe_draws; ++p) {
        const auto perturbations =
            sample_perturbations(scenario.hover, scenario.subset.size(), rng);
        const auto perturbed = apply_hover(scenario.subset, perturbations);
        etas.push_back(evaluator.eta(perturbed, {}));
    }
    std::sort(etas.begin(), etas.end());
    size_t idx = size_t(quantile * double(num_probe_draws));
    if (idx >= etas.size()) idx = etas.size() - 1;
    return etas[idx];
}

} // namespace uavbeam::dqn
