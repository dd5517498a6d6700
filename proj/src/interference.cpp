#include "uavbeam/interference.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace uavbeam {

void Box::validate() const {
    if (min.x > max.x || min.y > max.y || min.z > max.z)
        throw std::invalid_argument("box: min corner exceeds max corner");
}

InterferenceField sample_field(const Box& region, size_t num_sources,
                               std::pair<double, double> power_range, double noise_power,
                               Rng& rng) {
    region.validate();
    if (power_range.first < 0.0 || power_range.second < power_range.first)
        throw std::invalid_argument("sample_field: invalid power range");
    if (!(noise_power > 0.0))
        throw std::invalid_argument("sample_field: noise_power must be > 0");
    InterferenceField field;
    field.noise_power = noise_power;
    field.region = region;
    field.sources.reserve(num_sources);
    for (size_t i = 0; i < num_sources; ++i) {
        InterferenceSource s;
        s.position.x = rng.uniform(region.min.x, region.max.x);
        s.position.y = rng.uniform(region.min.y, region.max.y);
        s.position.z = rng.uniform(region.min.z, region.max.z);
        s.power = rng.uniform(power_range.first, power_range.second);
        field.sources.push_back(s);
    }
    return field;
}

double relative_gain(std::span<const UavState> subset, const BeamWeights& weights,
                     const Vec3& receiver, const Vec3& probe, double wavelength,
                     const ElementPattern& element) {
    const Vec3 ref = centroid(subset);
    const Direction steer = direction_between(ref, receiver);
    const double anchor = array_factor(subset, weights, steer, wavelength, element).magnitude;
    if (ref == probe) return 1.0; // on-axis degenerate probe
    const Direction toward = direction_between(ref, probe);
    const double mag = array_factor(subset, weights, toward, wavelength, element).magnitude;
    const double anchor_power = std::max(anchor * anchor, 1e-300);
    return (mag * mag) / anchor_power;
}

SinrReport subset_sinr(std::span<const UavState> subset_states, const BeamWeights& weights,
                       std::span<const std::complex<double>> channel_subset,
                       const Vec3& receiver, const InterferenceField& field,
                       const FadingParams& params, double tx_power,
                       const ElementPattern& element) {
    if (subset_states.size() != channel_subset.size())
        throw std::invalid_argument("subset_sinr: state/channel length mismatch");
    weights.validate();
    if (weights.size() != subset_states.size())
        throw std::invalid_argument("subset_sinr: weights length mismatch");
    double w_norm_sq = 0.0;
    for (size_t k = 0; k < weights.size(); ++k)
        w_norm_sq += weights.amplitudes[k] * weights.amplitudes[k];
    if (w_norm_sq == 0.0)
        throw std::invalid_argument("subset_sinr: degenerate all-zero weights");

    std::complex<double> combined{0.0, 0.0};
    for (size_t k = 0; k < channel_subset.size(); ++k) {
        const std::complex<double> w =
            weights.amplitudes[k] *
            std::complex<double>{std::cos(weights.phases[k]), std::sin(weights.phases[k])};
        combined += channel_subset[k] * w;
    }

    SinrReport report;
    report.signal_power = tx_power * std::norm(combined);
    report.noise_power = field.noise_power;
    const double wavelength = params.wavelength();
    double interference = 0.0;
    for (const auto& src : field.sources) {
        const double g_rel =
            relative_gain(subset_states, weights, receiver, src.position, wavelength, element);
        interference += src.power * params.path_gain(distance(src.position, receiver)) * g_rel;
    }
    report.interference_power = interference;
    report.sinr_db =
        10.0 * std::log10(report.signal_power / (report.interference_power + report.noise_power));
    return report;
}

std::vector<std::vector<double>> heatmap(const InterferenceField& field, double plane_z,
                                         size_t nx, size_t ny, const FadingParams& params,
                                         int threads) {
    if (nx < 1 || ny < 1)
        throw std::invalid_argument("heatmap: grid dimensions must be >= 1");
    field.region.validate();
    const Vec3 lo = field.region.min, hi = field.region.max;
    auto cell_x = [&](size_t ix) {
        return nx == 1 ? 0.5 * (lo.x + hi.x) : lo.x + (hi.x - lo.x) * double(ix) / double(nx - 1);
    };
    auto cell_y = [&](size_t iy) {
        return ny == 1 ? 0.5 * (lo.y + hi.y) : lo.y + (hi.y - lo.y) * double(iy) / double(ny - 1);
    };

    std::vector<std::vector<double>> grid(ny, std::vector<double>(nx));
    auto fill_rows = [&](size_t row_begin, size_t row_end) {
        for (size_t iy = row_begin; iy < row_end; ++iy)
            for (size_t ix = 0; ix < nx; ++ix) {
                const Vec3 p{cell_x(ix), cell_y(iy), plane_z};
                double total = field.noise_power;
                for (const auto& src : field.sources)
                    total += src.power * params.path_gain(distance(src.position, p));
                grid[iy][ix] = 10.0 * std::log10(total);
            }
    };

    const size_t nthreads = std::max(1, threads);
    if (nthreads == 1 || ny == 1) {
        fill_rows(0, ny);
        return grid;
    }
    // Each worker owns a disjoint row range; cell values are independent so
    // the result is identical for any thread count.
    std::vector<std::thread> workers;
    const size_t chunk = (ny + nthreads - 1) / nthreads;
    for (size_t t = 0; t < nthreads; ++t) {
        const size_t begin = t * chunk;
        const size_t end = std::min(ny, begin + chunk);
        if (begin >= end) break;
        workers.emplace_back(fill_rows, begin, end);
    }
    for (auto& w : workers) w.join();
    return grid;
}

} // namespace uavbeam
