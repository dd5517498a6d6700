#pragma once

#include <span>
#include <vector>

#include "uavbeam/dqn/learning.hpp"
#include "uavbeam/dqn/reform_env.hpp"

namespace uavbeam::dqn {

struct EpisodeStats {
    size_t episode = 0; // 1-based
    double total_reward = 0.0;
    size_t steps = 0;
    double final_eta = 0.0;
    double epsilon = 0.0;
    double initial_eta = 0.0;
};

struct TrainingLog {
    std::vector<double> losses; // pre-update MSE, one per minibatch update
    std::vector<EpisodeStats> episodes;
    QNetwork net;
    double eta_threshold = 0.0;
};

/// Full training loop: per episode draw a hover perturbation, act
/// epsilon-greedily, store transitions, and run one minibatch update per
/// step once the buffer holds a batch. Bit-reproducible given the rng state.
/// config.eta_threshold <= 0 triggers calibration from
/// config.threshold_probes hover probes at config.threshold_quantile.
TrainingLog train(const ReformScenario& scenario, const AgentConfig& config, Rng& rng);

struct ReformOutcome {
    std::vector<UavState> corrected; // states at the lowest eta visited
    double initial_eta = 0.0;
    double best_eta = 0.0;
    size_t steps = 0;
    bool reached_threshold = false;
};

/// Greedy (epsilon = 0) rollout to termination or the step budget; returns
/// the corrected states achieving the lowest eta seen, the initial state
/// included.
ReformOutcome propose_corrections(const QNetwork& net, const ReformScenario& scenario,
                                  const AgentConfig& config,
                                  std::span<const Perturbation> perturbations);

} // namespace uavbeam::dqn
