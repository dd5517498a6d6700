#pragma once

#include <span>
#include <vector>

#include "uavbeam/dqn/network.hpp"
#include "uavbeam/geometry.hpp"
#include "uavbeam/rng.hpp"

namespace uavbeam::dqn {

/// One replay record: (s_t, m_t, reward, s_{t+1}). terminal marks that the
/// distortion threshold was met, in which case the bootstrap term is zeroed;
/// step-budget timeouts are not terminal and keep bootstrapping.
struct Transition {
    std::vector<double> state;
    int action = 0;
    double reward = 0.0;
    std::vector<double> next_state;
    bool terminal = false;
};

/// Bounded FIFO of transitions with uniform sampling.
class ReplayBuffer {
  public:
    explicit ReplayBuffer(size_t capacity);

    void push(Transition t);
    size_t size() const { return data_.size(); }
    size_t capacity() const { return capacity_; }
    const Transition& at(size_t i) const { return data_[i]; }
    const Transition& sample(Rng& rng) const;
    std::vector<Transition> sample_batch(size_t n, Rng& rng) const;

  private:
    size_t capacity_;
    size_t next_ = 0; // slot the next push overwrites once full
    std::vector<Transition> data_;
};

/// Q-learning agent settings. position_step/phase_step are the per-action
/// correction increments of the beam re-forming environment; eta_threshold
/// <= 0 requests automatic calibration from hover probes.
struct AgentConfig {
    double learning_rate = 0.05;
    double discount = 0.9;
    double epsilon_start = 1.0;
    double epsilon_end = 0.05;
    double epsilon_decay = 0.99; // multiplicative, per episode
    size_t batch_size = 32;
    size_t replay_capacity = 2000;
    double eta_threshold = 0.0;
    double threshold_quantile = 0.05;
    size_t threshold_probes = 100;
    size_t max_steps_per_episode = 250;
    size_t num_episodes = 300;
    double position_step = 0.01;        // meters (spacing/100 by default)
    double phase_step = kPi / 64.0;     // radians
    std::vector<size_t> hidden_sizes{128, 128};
    double lr_decay_steps = 1000.0;     // step size alpha / (1 + t / lr_decay_steps)
    bool constant_lr = false;
    bool frozen_target = false;         // optional stability variant
    size_t target_refresh = 200;        // updates between frozen-target syncs

    void validate() const;
    /// Step-size sequence for update index t' (0-based).
    double step_size(size_t update_index) const;
};

/// Tabular-form target: Q + alpha (reward + gamma (Q'_max - Q)). Callers
/// pass q_next_max = 0 for terminal transitions.
double bellman_target(double q_current, double reward, double q_next_max, double alpha,
                      double gamma);

/// Mean squared error. Throws on empty or mismatched inputs.
double dqn_loss(std::span<const double> predicted, std::span<const double> targets);

/// Per-transition training targets evaluated with target_net (the same
/// network unless a frozen copy is used).
std::vector<double> compute_targets(const QNetwork& target_net,
                                    std::span<const Transition> batch, double alpha,
                                    double gamma);

/// Batch MSE of the taken-action outputs against fixed targets.
double loss_given_targets(const QNetwork& net, std::span<const Transition> batch,
                          std::span<const double> targets);

/// Backpropagated average gradient of loss_given_targets w.r.t. every
/// parameter (per-transition gradient on the taken action's output, averaged
/// over the batch). Returns the batch loss; grads must be zeros-shaped like
/// net.
double gradient_given_targets(const QNetwork& net, std::span<const Transition> batch,
                              std::span<const double> targets, QNetwork& grads);

/// One minibatch update: computes targets from net itself, descends the
/// averaged loss gradient with the update-index step size, and returns the
/// pre-update batch loss.
double backward_and_update(QNetwork& net, std::span<const Transition> batch,
                           const AgentConfig& config, size_t update_index);

/// Same but with targets from a separate (frozen) network.
double backward_and_update(QNetwork& net, const QNetwork& target_net,
                           std::span<const Transition> batch, const AgentConfig& config,
                           size_t update_index);

/// Epsilon-greedy action: with probability epsilon a uniform action,
/// otherwise the argmax of the Q-values, ties broken toward the lowest
/// index. epsilon = 0 consumes no random draws.
int epsilon_greedy(const QNetwork& net, std::span<const double> state, double epsilon,
                   Rng& rng);

} // namespace uavbeam::dqn
