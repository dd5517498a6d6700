#pragma once

#include <complex>
#include <span>
#include <vector>

#include "uavbeam/geometry.hpp"
#include "uavbeam/hover.hpp"
#include "uavbeam/rng.hpp"

namespace uavbeam {

/// Complex channel gain per UAV toward the receiver at one sample instant.
struct ChannelRealization {
    std::vector<std::complex<double>> gains;
    long timestamp = 0;
};

/// Rician fading over a distance power law. rician_k is the linear LoS power
/// ratio (infinity selects the pure line-of-sight limit); reference_gain is
/// the power gain at 1 m.
struct FadingParams {
    double rician_k = 5.0;
    double pathloss_exponent = 2.2;
    double reference_gain = 1.0;
    double carrier_freq = 3.5e9;

    void validate() const;
    double wavelength() const { return kSpeedOfLight / carrier_freq; }
    /// reference_gain * d^-pathloss_exponent, distance floored at 1 mm as a
    /// near-field clamp so the gain stays finite.
    double path_gain(double dist) const;
};

/// h_k = sqrt(reference_gain * d_k^-n) * (sqrt(K/(K+1)) e^{-j 2 pi d_k / lambda}
///       + sqrt(1/(K+1)) CN(0,1)),  d_k = |receiver - uav_k|.
/// Throws on zero distance.
ChannelRealization sample_channel(std::span<const UavState> uavs, const Vec3& receiver,
                                  const FadingParams& params, Rng& rng, long timestamp = 0);

/// Maximum ratio transmission weights: conj(h) / ||h||. Unit norm;
/// the combined gain h . w equals ||h|| (real, nonnegative).
/// Throws std::invalid_argument("degenerate channel") on an all-zero vector.
std::vector<std::complex<double>> mrt_weights(std::span<const std::complex<double>> h);

/// Pearson correlation coefficient. Throws
/// std::invalid_argument("undefined correlation") when either series has
/// zero variance, std::invalid_argument otherwise on bad lengths.
double pearson(std::span<const double> x, std::span<const double> y);

struct DistanceCorrelation {
    size_t pair_index;        // 1-based index of the partner UAV
    double relative_distance; // nominal |r_ref - r_j|, meters
    double pearson_r;         // amplitude-series correlation
};

/// For each UAV j != reference: the nominal distance to the reference UAV and
/// the Pearson correlation between the two |h| time series, sampled over
/// num_time_samples independent channel draws with a fresh hover displacement
/// applied to every UAV per sample.
std::vector<DistanceCorrelation> distance_fading_correlation(
    size_t reference_uav, std::span<const UavState> uavs, const Vec3& receiver,
    const FadingParams& params, const HoverSpec& hover, size_t num_time_samples, Rng& rng);

} // namespace uavbeam
