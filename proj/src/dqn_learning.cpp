#include "uavbeam/dqn/learning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uavbeam::dqn {

ReplayBuffer::ReplayBuffer(size_t capacity) : capacity_(capacity) {
    if (capacity == 0)
        throw std::invalid_argument("replay buffer: capacity must be > 0");
    data_.reserve(capacity);
}

void ReplayBuffer::push(Transition t) {
    if (data_.size() < capacity_) {
        data_.push_back(std::move(t));
    } else {
        data_[next_] = std::move(t); // overwrite oldest
        next_ = (next_ + 1) % capacity_;
    }
}

const Transition& ReplayBuffer::sample(Rng& rng) const {
    if (data_.empty())
        throw std::logic_error("replay buffer: sampling from empty buffer");
    return data_[rng.below(data_.size())];
}

std::vector<Transition> ReplayBuffer::sample_batch(size_t n, Rng& rng) const {
    std::vector<Transition> batch;
    batch.reserve(n);
    for (size_t i = 0; i < n; ++i) batch.push_back(sample(rng));
    return batch;
}

void AgentConfig::validate() const {
    if (!(learning_rate > 0.0) || learning_rate > 1.0)
        throw std::invalid_argument("agent config: learning_rate must be in (0, 1]");
    if (!(discount > 0.0) || discount > 1.0)
        throw std::invalid_argument("agent config: discount must be in (0, 1]");
    if (epsilon_start < 0.0 || epsilon_start > 1.0 || epsilon_end < 0.0 || epsilon_end > 1.0)
        throw std::invalid_argument("agent config: epsilon bounds must be in [0, 1]");
    if (!(epsilon_decay > 0.0) || epsilon_decay > 1.0)
        throw std::invalid_argument("agent config: epsilon_decay must be in (0, 1]");
    if (batch_size == 0 || batch_size > replay_capacity)
        throw std::invalid_argument("agent config: require 1 <= batch_size <= replay_capacity");
    if (threshold_quantile <= 0.0 || threshold_quantile >= 1.0)
        throw std::invalid_argument("agent config: threshold_quantile must be in (0, 1)");
    if (threshold_probes < 2)
        throw std::invalid_argument("agent config: threshold_probes must be >= 2");
    if (max_steps_per_episode == 0)
        throw std::invalid_argument("agent config: max_steps_per_episode must be > 0");
    if (!(position_step > 0.0) || !(phase_step > 0.0))
        throw std::invalid_argument("agent config: step sizes must be > 0");
    if (hidden_sizes.empty())
        throw std::invalid_argument("agent config: need at least one hidden layer");
    if (!(lr_decay_steps > 0.0))
        throw std::invalid_argument("agent config: lr_decay_steps must be > 0");
}

double AgentConfig::step_size(size_t update_index) const {
    if (constant_lr) return learning_rate;
    return learning_rate / (1.0 + double(update_index) / lr_decay_steps);
}

double bellman_target(double q_current, double reward, double q_next_max, double alpha,
                      double gamma) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("bellman_target: alpha must be in (0, 1]");
    return q_current + alpha * (reward + gamma * (q_next_max - q_current));
}

double dqn_loss(std::span<const double> predicted, std::span<const double> targets) {
    if (predicted.empty())
        throw std::invalid_argument("dqn_loss: empty input");
    if (predicted.size() != targets.size())
        throw std::invalid_argument("dqn_loss: length mismatch");
    double acc = 0.0;
    for (size_t i = 0; i < predicted.size(); ++i) {
        const double d = predicted[i] - targets[i];
        acc += d * d;
    }
    return acc / double(predicted.size());
}

std::vector<double> compute_targets(const QNetwork& target_net,
                                    std::span<const Transition> batch, double alpha,
                                    double gamma) {
    std::vector<double> targets;
    targets.reserve(batch.size());
    for (const auto& t : batch) {
        const auto q = target_net.forward(t.state);
        if (t.action < 0 || size_t(t.action) >= q.size())
            throw std::invalid_argument("compute_targets: action index out of range");
        double q_next_max = 0.0;
        if (!t.terminal) {
            const auto qn = target_net.forward(t.next_state);
            q_next_max = *std::max_element(qn.begin(), qn.end());
        }
        targets.push_back(bellman_target(q[size_t(t.action)], t.reward, q_next_max, alpha, gamma));
    }
    return targets;
}

double loss_given_targets(const QNetwork& net, std::span<const Transition> batch,
                          std::span<const double> targets) {
    if (batch.empty())
        throw std::invalid_argument("dqn: empty minibatch");
    if (batch.size() != targets.size())
        throw std::invalid_argument("dqn: batch/target length mismatch");
    std::vector<double> predicted;
    predicted.reserve(batch.size());
    for (const auto& t : batch) predicted.push_back(net.forward(t.state)[size_t(t.action)]);
    return dqn_loss(predicted, targets);
}

double gradient_given_targets(const QNetwork& net, std::span<const Transition> batch,
                              std::span<const double> targets, QNetwork& grads) {
    if (batch.empty())
        throw std::invalid_argument("dqn: empty minibatch");
    if (batch.size() != targets.size())
        throw std::invalid_argument("dqn: batch/target length mismatch");
    const double inv_batch = 1.0 / double(batch.size());
    const size_t n_layers = net.layers.size();
    double loss_acc = 0.0;

    std::vector<std::vector<double>> acts;
    std::vector<double> delta, delta_prev;
    for (size_t b = 0; b < batch.size(); ++b) {
        const auto& t = batch[b];
        net.forward_cached(t.state, acts);
        const auto& q = acts.back();
        if (t.action < 0 || size_t(t.action) >= q.size())
            throw std::invalid_argument("dqn: action index out of range");
        const double err = q[size_t(t.action)] - targets[b];
        loss_acc += err * err;

        // Output-layer seed: only the taken action carries loss.
        delta.assign(net.output_size(), 0.0);
        delta[size_t(t.action)] = 2.0 * err;

        for (size_t l = n_layers; l-- > 0;) {
            const auto& layer = net.layers[l];
            auto& glayer = grads.layers[l];
            const auto& a_in = acts[l];
            for (size_t o = 0; o < layer.out; ++o) {
                const double d = delta[o];
                if (d == 0.0) continue;
                glayer.biases[o] += d * inv_batch;
                const double scaled = d * inv_batch;
                double* grow = glayer.weights.data() + o * layer.in;
                for (size_t i = 0; i < layer.in; ++i) grow[i] += scaled * a_in[i];
            }
            if (l == 0) break;
            // delta through W^T, gated by the rectifier of activations[l].
            delta_prev.assign(layer.in, 0.0);
            for (size_t o = 0; o < layer.out; ++o) {
                const double d = delta[o];
                if (d == 0.0) continue;
                const double* row = layer.weights.data() + o * layer.in;
                for (size_t i = 0; i < layer.in; ++i) delta_prev[i] += d * row[i];
            }
            for (size_t i = 0; i < layer.in; ++i)
                if (acts[l][i] <= 0.0) delta_prev[i] = 0.0;
            delta.swap(delta_prev);
        }
    }
    return loss_acc * inv_batch;
}

namespace {

// One cached forward pass per state feeds both the targets and the
// backpropagation; next-states need a plain forward only.
double apply_update(QNetwork& net, const QNetwork& target_net,
                    std::span<const Transition> batch, const AgentConfig& config,
                    size_t update_index) {
    config.validate();
    if (batch.empty())
        throw std::invalid_argument("dqn: empty minibatch");
    const bool same_net = &net == &target_net;
    const double inv_batch = 1.0 / double(batch.size());
    const size_t n_layers = net.layers.size();

    std::vector<std::vector<std::vector<double>>> acts(batch.size());
    std::vector<double> targets(batch.size());
    for (size_t b = 0; b < batch.size(); ++b) {
        const auto& t = batch[b];
        net.forward_cached(t.state, acts[b]);
        if (t.action < 0 || size_t(t.action) >= net.output_size())
            throw std::invalid_argument("dqn: action index out of range");
        const double q_cur = same_net ? acts[b].back()[size_t(t.action)]
                                      : target_net.forward(t.state)[size_t(t.action)];
        double q_next_max = 0.0;
        if (!t.terminal) {
            const auto qn = target_net.forward(t.next_state);
            q_next_max = *std::max_element(qn.begin(), qn.end());
        }
        targets[b] = bellman_target(q_cur, t.reward, q_next_max, config.learning_rate,
                                    config.discount);
    }

    QNetwork grads = QNetwork::zeros(net.layer_sizes);
    double loss_acc = 0.0;
    std::vector<double> delta, delta_prev;
    for (size_t b = 0; b < batch.size(); ++b) {
        const auto& t = batch[b];
        const double err = acts[b].back()[size_t(t.action)] - targets[b];
        loss_acc += err * err;
        delta.assign(net.output_size(), 0.0);
        delta[size_t(t.action)] = 2.0 * err;
        for (size_t l = n_layers; l-- > 0;) {
            const auto& layer = net.layers[l];
            auto& glayer = grads.layers[l];
            const auto& a_in = acts[b][l];
            for (size_t o = 0; o < layer.out; ++o) {
                const double d = delta[o];
                if (d == 0.0) continue;
                glayer.biases[o] += d * inv_batch;
                const double scaled = d * inv_batch;
                double* grow = glayer.weights.data() + o * layer.in;
                for (size_t i = 0; i < layer.in; ++i) grow[i] += scaled * a_in[i];
            }
            if (l == 0) break;
            delta_prev.assign(layer.in, 0.0);
            for (size_t o = 0; o < layer.out; ++o) {
                const double d = delta[o];
                if (d == 0.0) continue;
                const double* row = layer.weights.data() + o * layer.in;
                for (size_t i = 0; i < layer.in; ++i) delta_prev[i] += d * row[i];
            }
            for (size_t i = 0; i < layer.in; ++i)
                if (acts[b][l][i] <= 0.0) delta_prev[i] = 0.0;
            delta.swap(delta_prev);
        }
    }

    const double step = config.step_size(update_index);
    for (size_t l = 0; l < net.layers.size(); ++l) {
        auto& layer = net.layers[l];
        const auto& g = grads.layers[l];
        for (size_t i = 0; i < layer.weights.size(); ++i) layer.weights[i] -= step * g.weights[i];
        for (size_t i = 0; i < layer.biases.size(); ++i) layer.biases[i] -= step * g.biases[i];
    }
    return loss_acc * inv_batch;
}

} // namespace

double backward_and_update(QNetwork& net, std::span<const Transition> batch,
                           const AgentConfig& config, size_t update_index) {
    return apply_update(net, net, batch, config, update_index);
}

double backward_and_update(QNetwork& net, const QNetwork& target_net,
                           std::span<const Transition> batch, const AgentConfig& config,
                           size_t update_index) {
    return apply_update(net, target_net, batch, config, update_index);
}

int epsilon_greedy(const QNetwork& net, std::span<const double> state, double epsilon,
                   Rng& rng) {
    if (epsilon < 0.0 || epsilon > 1.0)
        throw std::invalid_argument("epsilon_greedy: epsilon must be in [0, 1]");
    if (epsilon > 0.0 && rng.uniform01() < epsilon)
        return int(rng.below(net.output_size()));
    const auto q = net.forward(state);
    size_t best = 0;
    for (size_t i = 1; i < q.size(); ++i)
        if (q[i] > q[best]) best = i;
    return int(best);
}

} // namespace uavbeam::dqn
