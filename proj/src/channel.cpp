#include "uavbeam/channel.hpp"

#include <algorithm>

#include <cmath>
#include <stdexcept>

namespace uavbeam {

void FadingParams::validate() const {
    if (rician_k < 0.0) // +inf allowed: pure LoS
        throw std::invalid_argument("fading params: rician_k must be >= 0");
    if (!(pathloss_exponent > 0.0))
        throw std::invalid_argument("fading params: pathloss_exponent must be > 0");
    if (!(reference_gain > 0.0))
        throw std::invalid_argument("fading params: reference_gain must be > 0");
    if (!(carrier_freq > 0.0))
        throw std::invalid_argument("fading params: carrier_freq must be > 0");
}

double FadingParams::path_gain(double dist) const {
    constexpr double kMinDistance = 1e-3;
    if (dist < kMinDistance) dist = kMinDistance;
    return reference_gain * std::pow(dist, -pathloss_exponent);
}

ChannelRealization sample_channel(std::span<const UavState> uavs, const Vec3& receiver,
                                  const FadingParams& params, Rng& rng, long timestamp) {
    params.validate();
    const bool pure_los = std::isinf(params.rician_k);
    const double los_w = pure_los ? 1.0 : std::sqrt(params.rician_k / (params.rician_k + 1.0));
    const double scatter_w = pure_los ? 0.0 : std::sqrt(1.0 / (params.rician_k + 1.0));
    const double lambda = params.wavelength();

    ChannelRealization out;
    out.timestamp = timestamp;
    out.gains.reserve(uavs.size());
    for (const auto& u : uavs) {
        const double d = distance(u.position, receiver);
        if (d == 0.0)
            throw std::invalid_argument("sample_channel: receiver coincides with a UAV");
        const double amp = std::sqrt(params.reference_gain * std::pow(d, -params.pathloss_exponent));
        const double los_phase = -2.0 * kPi * d / lambda;
        const std::complex<double> los{std::cos(los_phase), std::sin(los_phase)};
        // CN(0,1): real and imaginary parts are N(0, 1/2). The two normals
        // are drawn even in the pure-LoS limit so the stream advances
        // identically for any rician_k.
        const double re = rng.normal() * 0.7071067811865476;
        const double im = rng.normal() * 0.7071067811865476;
        out.gains.push_back(amp * (los_w * los + scatter_w * std::complex<double>{re, im}));
    }
    return out;
}

std::vector<std::complex<double>> mrt_weights(std::span<const std::complex<double>> h) {
    double norm_sq = 0.0;
    for (const auto& g : h) norm_sq += std::norm(g);
    if (norm_sq == 0.0 || h.empty())
        throw std::invalid_argument("degenerate channel: all-zero gain vector");
    const double inv = 1.0 / std::sqrt(norm_sq);
    std::vector<std::complex<double>> w;
    w.reserve(h.size());
    for (const auto& g : h) w.push_back(std::conj(g) * inv);
    return w;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw std::invalid_argument("pearson: series lengths differ");
    if (x.size() < 2)
        throw std::invalid_argument("pearson: need at least 2 samples");
    // Zero variance means a constant series; test that exactly rather than
    // through the rounded moment sums.
    const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
    const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
    if (*xmin == *xmax || *ymin == *ymax)
        throw std::invalid_argument("undefined correlation: zero variance series");
    const double n = double(x.size());
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw std::invalid_argument("undefined correlation: zero variance series");
    double r = sxy / std::sqrt(sxx * syy);
    if (r > 1.0) r = 1.0;
    if (r < -1.0) r = -1.0;
    return r;
}

std::vector<DistanceCorrelation> distance_fading_correlation(
    size_t reference_uav, std::span<const UavState> uavs, const Vec3& receiver,
    const FadingParams& params, const HoverSpec& hover, size_t num_time_samples, Rng& rng) {
    if (uavs.size() < 2)
        throw std::invalid_argument("distance_fading_correlation: need at least 2 UAVs");
    if (reference_uav >= uavs.size())
        throw std::invalid_argument("distance_fading_correlation: reference index out of range");
    if (num_time_samples < 2)
        throw std::invalid_argument("distance_fading_correlation: need at least 2 time samples");

    std::vector<std::vector<double>> amp(uavs.size(), std::vector<double>(num_time_samples));
    for (size_t t = 0; t < num_time_samples; ++t) {
        const auto perturbed = apply_hover(uavs, sample_perturbations(hover, uavs.size(), rng));
        const auto ch = sample_channel(perturbed, receiver, params, rng, long(t));
        for (size_t k = 0; k < uavs.size(); ++k) amp[k][t] = std::abs(ch.gains[k]);
    }

    std::vector<DistanceCorrelation> out;
    out.reserve(uavs.size() - 1);
    for (size_t j = 0; j < uavs.size(); ++j) {
        if (j == reference_uav) continue;
        DistanceCorrelation c;
        c.pair_index = j + 1;
        c.relative_distance = distance(uavs[reference_uav].position, uavs[j].position);
        c.pearson_r = pearson(amp[reference_uav], amp[j]);
        out.push_back(c);
    }
    return out;
}

} // namespace uavbeam
