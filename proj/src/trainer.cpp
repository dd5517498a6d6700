#include "uavbeam/dqn/trainer.hpp"

#include <algorithm>
#include <cmath>

namespace uavbeam::dqn {

TrainingLog train(const ReformScenario& scenario, const AgentConfig& config, Rng& rng) {
    config.validate();

    double threshold = config.eta_threshold;
    if (threshold <= 0.0)
        threshold = calibrate_threshold(scenario, config.threshold_probes,
                                        config.threshold_quantile, rng);

    ReformEnv env(scenario, threshold, config.position_step, config.phase_step,
                  config.max_steps_per_episode);

    std::vector<size_t> sizes;
    sizes.push_back(env.state_dim());
    sizes.insert(sizes.end(), config.hidden_sizes.begin(), config.hidden_sizes.end());
    sizes.push_back(env.num_actions());

    TrainingLog log;
    log.eta_threshold = threshold;
    log.net = QNetwork::he_init(sizes, rng);
    QNetwork frozen;
    if (config.frozen_target) frozen = log.net;

    ReplayBuffer buffer(config.replay_capacity);
    size_t update_index = 0;

    for (size_t ep = 1; ep <= config.num_episodes; ++ep) {
        const double epsilon = std::max(
            config.epsilon_end, config.epsilon_start * std::pow(config.epsilon_decay,
                                                                double(ep - 1)));
        const auto perturbations =
            sample_perturbations(scenario.hover, scenario.subset.size(), rng);
        std::vector<double> state = env.reset(perturbations);

        EpisodeStats stats;
        stats.episode = ep;
        stats.epsilon = epsilon;
        stats.initial_eta = env.initial_eta();

        while (!env.done()) {
            const int action = epsilon_greedy(log.net, state, epsilon, rng);
            StepResult sr = env.step(action);
            buffer.push(Transition{state, action, sr.reward, sr.state, sr.terminal});
            stats.total_reward += sr.reward;
            ++stats.steps;
            state = std::move(sr.state);

            if (buffer.size() >= config.batch_size) {
                const auto batch = buffer.sample_batch(config.batch_size, rng);
                double loss;
                if (config.frozen_target) {
                    loss = backward_and_update(log.net, frozen, batch, config, update_index);
                    if ((update_index + 1) % config.target_refresh == 0) frozen = log.net;
                } else {
                    loss = backward_and_update(log.net, batch, config, update_index);
                }
                log.losses.push_back(loss);
                ++update_index;
            }
        }
        stats.final_eta = env.eta();
        log.episodes.push_back(stats);
    }
    return log;
}

ReformOutcome propose_corrections(const QNetwork& net, const ReformScenario& scenario,
                                  const AgentConfig& config,
                                  std::span<const Perturbation> perturbations) {
    double threshold = config.eta_threshold;
    if (threshold <= 0.0)
        throw std::invalid_argument("propose_corrections: eta_threshold must be resolved (> 0)");
    ReformEnv env(scenario, threshold, config.position_step, config.phase_step,
                  config.max_steps_per_episode);
    std::vector<double> state = env.reset(perturbations);

    ReformOutcome out;
    out.initial_eta = env.initial_eta();
    out.best_eta = env.initial_eta();
    out.corrected = env.corrected_states();
    Rng unused(0); // greedy policy draws nothing

    while (!env.done()) {
        const int action = epsilon_greedy(net, state, 0.0, unused);
        StepResult sr = env.step(action);
        state = std::move(sr.state);
        ++out.steps;
        if (sr.eta_after < out.best_eta) {
            out.best_eta = sr.eta_after;
            out.corrected = env.corrected_states();
        }
        if (sr.terminal) out.reached_threshold = true;
    }
    return out;
}

} // namespace uavbeam::dqn
