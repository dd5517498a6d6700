#include "uavbeam/dqn/network.hpp"

#include <charconv>
#include <cstring>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace uavbeam::dqn {

namespace {

void check_sizes(std::span<const size_t> sizes) {
    if (sizes.size() < 2)
        throw std::invalid_argument("q-network: need at least input and output layer sizes");
    for (size_t s : sizes)
        if (s == 0)
            throw std::invalid_argument("q-network: zero layer size");
}

#if defined(__GNUC__)
typedef double v4df __attribute__((vector_size(32)));
#endif

// Wide-accumulator dot product. The lane structure is fixed, so results are
// bit-reproducible run to run; it only reassociates relative to a naive
// left-to-right sum, which no caller depends on.
double dot_unrolled(const double* a, const double* b, size_t n) {
#if defined(__GNUC__)
    v4df acc0{0.0, 0.0, 0.0, 0.0}, acc1{0.0, 0.0, 0.0, 0.0};
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        v4df va0, vb0, va1, vb1;
        std::memcpy(&va0, a + i, sizeof(va0));
        std::memcpy(&vb0, b + i, sizeof(vb0));
        std::memcpy(&va1, a + i + 4, sizeof(va1));
        std::memcpy(&vb1, b + i + 4, sizeof(vb1));
        acc0 += va0 * vb0;
        acc1 += va1 * vb1;
    }
    double s = ((acc0[0] + acc0[1]) + (acc0[2] + acc0[3])) +
               ((acc1[0] + acc1[1]) + (acc1[2] + acc1[3]));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
#else
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
#endif
}

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{})
        throw std::runtime_error("q-network: double formatting failed");
    return std::string(buf, end);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size())
        throw std::runtime_error("q-network: malformed parameter value '" + s + "'");
    return v;
}

} // namespace

QNetwork QNetwork::zeros(std::span<const size_t> sizes) {
    check_sizes(sizes);
    QNetwork net;
    net.layer_sizes.assign(sizes.begin(), sizes.end());
    for (size_t l = 0; l + 1 < sizes.size(); ++l) {
        Layer layer;
        layer.in = sizes[l];
        layer.out = sizes[l + 1];
        layer.weights.assign(layer.in * layer.out, 0.0);
        layer.biases.assign(layer.out, 0.0);
        net.layers.push_back(std::move(layer));
    }
    return net;
}

QNetwork QNetwork::he_init(std::span<const size_t> sizes, Rng& rng) {
    QNetwork net = zeros(sizes);
    for (auto& layer : net.layers) {
        const double scale = std::sqrt(2.0 / double(layer.in));
        for (auto& w : layer.weights) w = scale * rng.normal();
    }
    return net;
}

std::vector<double> QNetwork::forward(std::span<const double> state) const {
    if (state.size() != input_size())
        throw std::invalid_argument("q-network: state dimension mismatch");
    std::vector<double> a(state.begin(), state.end());
    std::vector<double> z;
    for (size_t l = 0; l < layers.size(); ++l) {
        const Layer& layer = layers[l];
        z.assign(layer.out, 0.0);
        for (size_t o = 0; o < layer.out; ++o) {
            const double* row = layer.weights.data() + o * layer.in;
            z[o] = layer.biases[o] + dot_unrolled(row, a.data(), layer.in);
        }
        const bool hidden = l + 1 < layers.size();
        if (hidden)
            for (auto& v : z)
                if (v < 0.0) v = 0.0;
        a.swap(z);
    }
    return a;
}

void QNetwork::forward_cached(std::span<const double> state,
                              std::vector<std::vector<double>>& activations) const {
    if (state.size() != input_size())
        throw std::invalid_argument("q-network: state dimension mismatch");
    activations.resize(layers.size() + 1);
    activations[0].assign(state.begin(), state.end());
    for (size_t l = 0; l < layers.size(); ++l) {
        const Layer& layer = layers[l];
        auto& out = activations[l + 1];
        out.assign(layer.out, 0.0);
        const auto& a = activations[l];
        for (size_t o = 0; o < layer.out; ++o) {
            const double* row = layer.weights.data() + o * layer.in;
            out[o] = layer.biases[o] + dot_unrolled(row, a.data(), layer.in);
        }
        if (l + 1 < layers.size())
            for (auto& v : out)
                if (v < 0.0) v = 0.0;
    }
}

size_t QNetwork::num_params() const {
    size_t n = 0;
    for (const auto& l : layers) n += l.weights.size() + l.biases.size();
    return n;
}

double QNetwork::get_param(size_t idx) const {
    for (const auto& l : layers) {
        if (idx < l.weights.size()) return l.weights[idx];
        idx -= l.weights.size();
        if (idx < l.biases.size()) return l.biases[idx];
        idx -= l.biases.size();
    }
    throw std::out_of_range("q-network: parameter index out of range");
}

void QNetwork::set_param(size_t idx, double value) {
    for (auto& l : layers) {
        if (idx < l.weights.size()) {
            l.weights[idx] = value;
            return;
        }
        idx -= l.weights.size();
        if (idx < l.biases.size()) {
            l.biases[idx] = value;
            return;
        }
        idx -= l.biases.size();
    }
    throw std::out_of_range("q-network: parameter index out of range");
}

void QNetwork::save(std::ostream& os, uint64_t config_hash) const {
    os << "uavbeam-qnet 1\n";
    os << "config_hash " << std::hex << config_hash << std::dec << "\n";
    os << "layers " << layer_sizes.size();
    for (size_t s : layer_sizes) os << ' ' << s;
    os << "\nparams " << num_params() << "\n";
    for (const auto& l : layers) {
        for (double w : l.weights) os << format_double(w) << "\n";
        for (double b : l.biases) os << format_double(b) << "\n";
    }
}

QNetwork QNetwork::load(std::istream& is, uint64_t* config_hash) {
    std::string magic;
    int version = 0;
    if (!(is >> magic >> version) || magic != "uavbeam-qnet" || version != 1)
        throw std::runtime_error("q-network checkpoint: bad header");
    std::string key;
    uint64_t hash = 0;
    if (!(is >> key >> std::hex >> hash >> std::dec) || key != "config_hash")
        throw std::runtime_error("q-network checkpoint: missing config hash");
    if (config_hash) *config_hash = hash;
    size_t n_sizes = 0;
    if (!(is >> key >> n_sizes) || key != "layers")
        throw std::runtime_error("q-network checkpoint: missing layer sizes");
    std::vector<size_t> sizes(n_sizes);
    for (auto& s : sizes)
        if (!(is >> s)) throw std::runtime_error("q-network checkpoint: truncated layer sizes");
    size_t n_params = 0;
    if (!(is >> key >> n_params) || key != "params")
        throw std::runtime_error("q-network checkpoint: missing parameter count");
    QNetwork net = zeros(sizes);
    if (n_params != net.num_params())
        throw std::runtime_error("q-network checkpoint: parameter count mismatch");
    std::string token;
    for (auto& l : net.layers) {
        for (auto& w : l.weights) {
            if (!(is >> token)) throw std::runtime_error("q-network checkpoint: truncated");
            w = parse_double(token);
        }
        for (auto& b : l.biases) {
            if (!(is >> token)) throw std::runtime_error("q-network checkpoint: truncated");
            b = parse_double(token);
        }
    }
    return net;
}

void QNetwork::save_file(const std::string& path, uint64_t config_hash) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("q-network: cannot open '" + path + "' for writing");
    save(os, config_hash);
    if (!os) throw std::runtime_error("q-network: write failed for '" + path + "'");
}

QNetwork QNetwork::load_file(const std::string& path, uint64_t* config_hash) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("q-network: cannot open '" + path + "'");
    return load(is, config_hash);
}

} // namespace uavbeam::dqn
