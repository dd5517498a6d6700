#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "uavbeam/beampattern.hpp"
#include "uavbeam/channel.hpp"
#include "uavbeam/geometry.hpp"
#include "uavbeam/rng.hpp"

namespace uavbeam {

struct InterferenceSource {
    Vec3 position{};
    double power = 0.0; // watts
};

/// Axis-aligned placement region for interference sources.
struct Box {
    Vec3 min{};
    Vec3 max{};

    void validate() const; // throws on inverted boxes
};

struct InterferenceField {
    std::vector<InterferenceSource> sources;
    double noise_power = 1e-9; // sigma^2, watts
    Box region{};
};

struct SinrReport {
    double signal_power = 0.0;
    double interference_power = 0.0;
    double noise_power = 0.0;
    double sinr_db = 0.0; // 10 log10(signal / (interference + noise))
};

/// Sources i.i.d. uniform over the box, powers i.i.d. uniform over
/// power_range. Deterministic given the rng state.
InterferenceField sample_field(const Box& region, size_t num_sources,
                               std::pair<double, double> power_range, double noise_power,
                               Rng& rng);

/// Normalized array-factor power gain of the subset toward a probe point:
/// |AF(dir to probe)|^2 / |AF(dir to receiver)|^2, directions taken from the
/// subset centroid. Equals 1 toward the receiver by construction; with MRT
/// or steering weights that is also where the pattern is coherent, so the
/// ratio acts as the subset's receive sensitivity toward the probe.
double relative_gain(std::span<const UavState> subset, const BeamWeights& weights,
                     const Vec3& receiver, const Vec3& probe, double wavelength,
                     const ElementPattern& element = {});

/// SINR of one candidate subset:
///   signal       = tx_power * |sum_k h_k w_k|^2
///   interference = sum_j P_j * path_gain(|source_j - receiver|) * G_rel(source_j)
/// where G_rel is relative_gain above (sidelobe-weighted leakage).
SinrReport subset_sinr(std::span<const UavState> subset_states, const BeamWeights& weights,
                       std::span<const std::complex<double>> channel_subset,
                       const Vec3& receiver, const InterferenceField& field,
                       const FadingParams& params, double tx_power = 1.0,
                       const ElementPattern& element = {});

/// Aggregate interference power map on the z = plane_z plane over the
/// field's region, nx x ny cells, each value
/// 10 log10(sum_j P_j path_gain(d) + sigma^2). Row-major [iy][ix] with x
/// varying fastest inside a row. threads > 1 splits rows; output is
/// identical for any thread count.
std::vector<std::vector<double>> heatmap(const InterferenceField& field, double plane_z,
                                         size_t nx, size_t ny, const FadingParams& params,
                                         int threads = 1);

} // namespace uavbeam
