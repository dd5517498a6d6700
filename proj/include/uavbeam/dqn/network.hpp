#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "uavbeam/rng.hpp"

namespace uavbeam::dqn {

/// Fully connected feedforward Q-value approximator: rectifier activations
/// on hidden layers, identity on the output layer. One output per action.
class QNetwork {
  public:
    struct Layer {
        size_t in = 0;
        size_t out = 0;
        std::vector<double> weights; // row-major [out][in]
        std::vector<double> biases;  // [out]
    };

    QNetwork() = default;

    static QNetwork zeros(std::span<const size_t> layer_sizes);
    /// He-normal weight initialization, zero biases. Deterministic given rng.
    static QNetwork he_init(std::span<const size_t> layer_sizes, Rng& rng);

    std::vector<double> forward(std::span<const double> state) const;
    /// Forward pass keeping every layer's activation (activations[0] is the
    /// input, activations.back() the Q-values) for backpropagation.
    void forward_cached(std::span<const double> state,
                        std::vector<std::vector<double>>& activations) const;

    size_t input_size() const { return layer_sizes.empty() ? 0 : layer_sizes.front(); }
    size_t output_size() const { return layer_sizes.empty() ? 0 : layer_sizes.back(); }

    // Flat parameter view (per layer: weights then biases), used by the
    // finite-difference checks and the serializer.
    size_t num_params() const;
    double get_param(size_t idx) const;
    void set_param(size_t idx, double value);

    void save(std::ostream& os, uint64_t config_hash) const;
    static QNetwork load(std::istream& is, uint64_t* config_hash = nullptr);
    void save_file(const std::string& path, uint64_t config_hash) const;
    static QNetwork load_file(const std::string& path, uint64_t* config_hash = nullptr);

    std::vector<size_t> layer_sizes;
    std::vector<Layer> layers;
};

} // namespace uavbeam::dqn
