#include "uavbeam/beampattern.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uavbeam {

namespace {

// One shared far-field kernel so the ideal and distorted paths follow the
// same arithmetic: with identical inputs they produce bitwise-equal sums.
std::complex<double> pattern_sum(std::span<const UavState> states, const BeamWeights& weights,
                                 std::span<const double> extra_phase, const Vec3& u,
                                 double wavenumber, const ElementPattern& element) {
    std::complex<double> s{0.0, 0.0};
    for (size_t k = 0; k < states.size(); ++k) {
        const auto& st = states[k];
        const double g = element.gain(st.rotation, u);
        const double amp = st.power * weights.amplitudes[k] * g;
        double ph = st.phase + weights.phases[k] + wavenumber * dot(st.position, u);
        if (!extra_phase.empty()) ph += extra_phase[k];
        s += amp * std::complex<double>{std::cos(ph), std::sin(ph)};
    }
    return s;
}

double pow_clamped(double c, double q) {
    if (c <= 0.0) return 0.0;
    if (q == 1.0) return c;
    if (q == 2.0) return c * c;
    return std::pow(c, q);
}

void check_sizes(size_t n_states, const BeamWeights& weights, std::span<const double> phase_error) {
    weights.validate();
    if (weights.size() != n_states)
        throw std::invalid_argument("beam weights length does not match UAV count");
    if (!phase_error.empty() && phase_error.size() != n_states)
        throw std::invalid_argument("phase_error length does not match UAV count");
}

} // namespace

BeamWeights BeamWeights::uniform(size_t k) {
    BeamWeights w;
    w.amplitudes.assign(k, 1.0);
    w.phases.assign(k, 0.0);
    return w;
}

BeamWeights BeamWeights::from_mrt(std::span<const std::complex<double>> w) {
    BeamWeights out;
    out.amplitudes.reserve(w.size());
    out.phases.reserve(w.size());
    for (const auto& c : w) {
        out.amplitudes.push_back(std::abs(c));
        out.phases.push_back(std::arg(c));
    }
    return out;
}

void BeamWeights::validate() const {
    if (amplitudes.size() != phases.size())
        throw std::invalid_argument("beam weights: amplitude/phase length mismatch");
    for (double a : amplitudes)
        if (!(a >= 0.0))
            throw std::invalid_argument("beam weights: amplitudes must be >= 0");
}

AngularGrid AngularGrid::uniform(size_t n_theta, size_t n_phi) {
    if (n_theta < 1 || n_phi < 1)
        throw std::invalid_argument("angular grid: dimensions must be >= 1");
    AngularGrid g;
    g.thetas.reserve(n_theta);
    g.phis.reserve(n_phi);
    const double ht = 2.0 * kPi / double(n_theta);
    const double hp = 2.0 * kPi / double(n_phi);
    for (size_t i = 0; i < n_theta; ++i) g.thetas.push_back(-kPi + (double(i) + 0.5) * ht);
    for (size_t i = 0; i < n_phi; ++i) g.phis.push_back(-kPi + (double(i) + 0.5) * hp);
    return g;
}

double AngularGrid::theta_step() const {
    return thetas.size() >= 2 ? thetas[1] - thetas[0] : 2.0 * kPi;
}

double AngularGrid::phi_step() const {
    return phis.size() >= 2 ? phis[1] - phis[0] : 2.0 * kPi;
}

void AngularGrid::validate() const {
    if (thetas.empty() || phis.empty())
        throw std::invalid_argument("angular grid: empty axis");
    auto check = [](const std::vector<double>& v, const char* name) {
        for (size_t i = 0; i < v.size(); ++i) {
            if (v[i] < -kPi - 1e-12 || v[i] > kPi + 1e-12)
                throw std::invalid_argument(std::string("angular grid: ") + name +
                                            " outside [-pi, pi]");
            if (i > 0 && !(v[i] > v[i - 1]))
                throw std::invalid_argument(std::string("angular grid: ") + name +
                                            " not strictly increasing");
        }
    };
    check(thetas, "thetas");
    check(phis, "phis");
}

double ElementPattern::gain(const RotationAngles& rotation, const Vec3& dir_unit) const {
    if (exponent_q == 0.0) return 1.0;
    const Vec3 b = rotate_vector(boresight_body, rotation);
    return pow_clamped(dot(b, dir_unit), exponent_q);
}

PatternSample array_factor(std::span<const UavState> uavs, const BeamWeights& weights,
                           const Direction& d, double wavelength, const ElementPattern& element) {
    check_sizes(uavs.size(), weights, {});
    if (!(wavelength > 0.0))
        throw std::invalid_argument("array_factor: wavelength must be > 0");
    const Vec3 u = unit_vector(d);
    const auto s = pattern_sum(uavs, weights, {}, u, 2.0 * kPi / wavelength, element);
    return {d, std::abs(s), std::arg(s)};
}

std::vector<double> steering_phases(std::span<const UavState> uavs, const Vec3& receiver,
                                    double wavelength) {
    const Vec3 u = unit_vector(direction_between(centroid(uavs), receiver));
    const double wavenumber = 2.0 * kPi / wavelength;
    std::vector<double> phases;
    phases.reserve(uavs.size());
    for (const auto& s : uavs) {
        double p = std::fmod(-wavenumber * dot(s.position, u), 2.0 * kPi);
        if (p < 0.0) p += 2.0 * kPi;
        phases.push_back(p);
    }
    return phases;
}

PatternSample distorted_array_factor(std::span<const UavState> nominal,
                                     std::span<const UavState> perturbed,
                                     const BeamWeights& weights, const Direction& d,
                                     double dtheta, double dphi,
                                     std::span<const double> phase_error, double wavelength,
                                     const ElementPattern& element) {
    if (nominal.size() != perturbed.size())
        throw std::invalid_argument("distorted_array_factor: nominal/perturbed length mismatch");
    check_sizes(perturbed.size(), weights, phase_error);
    const Direction hat{d.theta + dtheta, d.phi + dphi};
    const Vec3 u = unit_vector(hat);
    const auto s = pattern_sum(perturbed, weights, phase_error, u, 2.0 * kPi / wavelength, element);
    return {hat, std::abs(s), std::arg(s)};
}

double distortion_objective(std::span<const UavState> nominal,
                            std::span<const UavState> perturbed, const BeamWeights& weights,
                            std::span<const double> phase_error, const AngularGrid& grid,
                            double wavelength, const ElementPattern& element) {
    if (nominal.size() != perturbed.size())
        throw std::invalid_argument("distortion_objective: nominal/perturbed length mismatch");
    check_sizes(perturbed.size(), weights, phase_error);
    grid.validate();
    const double wavenumber = 2.0 * kPi / wavelength;
    double acc = 0.0;
    for (double theta : grid.thetas)
        for (double phi : grid.phis) {
            const Vec3 u = unit_vector(Direction{theta, phi});
            const double b = std::abs(pattern_sum(nominal, weights, {}, u, wavenumber, element));
            const double bh =
                std::abs(pattern_sum(perturbed, weights, phase_error, u, wavenumber, element));
            const double diff = b - bh;
            acc += diff * diff;
        }
    return 0.25 * grid.theta_step() * grid.phi_step() * acc;
}

double pattern_energy(std::span<const UavState> uavs, const BeamWeights& weights,
                      const AngularGrid& grid, double wavelength, const ElementPattern& element) {
    check_sizes(uavs.size(), weights, {});
    grid.validate();
    const double wavenumber = 2.0 * kPi / wavelength;
    double acc = 0.0;
    for (double theta : grid.thetas)
        for (double phi : grid.phis) {
            const Vec3 u = unit_vector(Direction{theta, phi});
            const double b = std::abs(pattern_sum(uavs, weights, {}, u, wavenumber, element));
            acc += b * b;
        }
    return 0.25 * grid.theta_step() * grid.phi_step() * acc;
}

std::vector<PatternSample> aoa_sweep(std::span<const UavState> uavs, const BeamWeights& weights,
                                     double phi_fixed, std::span<const double> theta_grid,
                                     double wavelength, const ElementPattern& element) {
    if (theta_grid.empty())
        throw std::invalid_argument("aoa_sweep: empty theta grid");
    std::vector<PatternSample> out;
    out.reserve(theta_grid.size());
    double peak = 0.0;
    for (double theta : theta_grid) {
        out.push_back(array_factor(uavs, weights, Direction{theta, phi_fixed}, wavelength, element));
        peak = std::max(peak, out.back().magnitude);
    }
    if (peak > 0.0)
        for (auto& s : out) s.magnitude /= peak;
    return out;
}

std::vector<std::vector<PowerPhaseCell>> hover_power_phase_map(
    std::span<const UavState> uavs, const BeamWeights& weights, const Vec3& receiver,
    std::span<const double> pitch_grid, std::span<const double> roll_grid, double wavelength,
    const ElementPattern& element) {
    const Direction toward = direction_between(centroid(uavs), receiver);
    std::vector<UavState> rotated(uavs.begin(), uavs.end());
    std::vector<std::vector<PowerPhaseCell>> map(pitch_grid.size());
    for (size_t i = 0; i < pitch_grid.size(); ++i) {
        map[i].resize(roll_grid.size());
        for (size_t j = 0; j < roll_grid.size(); ++j) {
            for (auto& s : rotated) s.rotation = {0.0, pitch_grid[i], roll_grid[j]};
            const auto sample =
                distorted_array_factor(uavs, rotated, weights, toward, 0.0, 0.0, {}, wavelength,
                                       element);
            map[i][j] = {20.0 * std::log10(sample.magnitude), sample.phase};
        }
    }
    return map;
}

DistortionEvaluator::DistortionEvaluator(std::span<const UavState> nominal,
                                         const BeamWeights& weights, const AngularGrid& grid,
                                         double wavelength, const ElementPattern& element)
    : nominal_(nominal.begin(), nominal.end()), weights_(weights), element_(element),
      wavenumber_(2.0 * kPi / wavelength) {
    check_sizes(nominal_.size(), weights_, {});
    grid.validate();
    cell_area_ = grid.theta_step() * grid.phi_step();
    units_.reserve(grid.thetas.size() * grid.phis.size());
    for (double theta : grid.thetas)
        for (double phi : grid.phis) units_.push_back(unit_vector(Direction{theta, phi}));

    std::vector<double> rows_re, rows_im;
    fill_rows(nominal_, {}, rows_re, rows_im);
    nominal_mag_.resize(units_.size());
    magnitudes_from_rows(rows_re, rows_im, nominal_mag_);
    double acc = 0.0;
    for (double m : nominal_mag_) acc += m * m;
    energy_ = 0.25 * cell_area_ * acc;
}

void DistortionEvaluator::fill_element_row(const UavState& state, size_t k,
                                           const Vec3& boresight_rotated, double extra_phase,
                                           double* re, double* im) const {
    const bool isotropic = element_.exponent_q == 0.0;
    const double amp_base = state.power * weights_.amplitudes[k];
    const double base_phase = state.phase + weights_.phases[k];
    for (size_t i = 0; i < units_.size(); ++i) {
        const Vec3& u = units_[i];
        double amp = amp_base;
        if (!isotropic) amp *= pow_clamped(dot(boresight_rotated, u), element_.exponent_q);
        double ph = base_phase + wavenumber_ * dot(state.position, u);
        ph += extra_phase;
        re[i] = amp * std::cos(ph);
        im[i] = amp * std::sin(ph);
    }
}

void DistortionEvaluator::fill_rows(std::span<const UavState> states,
                                    std::span<const double> phase_error,
                                    std::vector<double>& rows_re,
                                    std::vector<double>& rows_im) const {
    const size_t cells = units_.size();
    rows_re.assign(states.size() * cells, 0.0);
    rows_im.assign(states.size() * cells, 0.0);
    for (size_t k = 0; k < states.size(); ++k) {
        const Vec3 bore = rotate_vector(element_.boresight_body, states[k].rotation);
        const double extra = phase_error.empty() ? 0.0 : phase_error[k];
        fill_element_row(states[k], k, bore, extra, rows_re.data() + k * cells,
                         rows_im.data() + k * cells);
    }
}

void DistortionEvaluator::magnitudes_from_rows(std::span<const double> rows_re,
                                               std::span<const double> rows_im,
                                               std::span<double> out) const {
    const size_t cells = units_.size();
    const size_t n = nominal_.size();
    for (size_t i = 0; i < cells; ++i) {
        double re = 0.0, im = 0.0;
        for (size_t k = 0; k < n; ++k) {
            re += rows_re[k * cells + i];
            im += rows_im[k * cells + i];
        }
        out[i] = std::sqrt(re * re + im * im);
    }
}

double DistortionEvaluator::objective_from_rows(std::span<const double> rows_re,
                                                std::span<const double> rows_im) const {
    if (rows_re.size() != nominal_.size() * units_.size() || rows_im.size() != rows_re.size())
        throw std::invalid_argument("distortion evaluator: term-row cache size mismatch");
    std::vector<double> mag(units_.size());
    magnitudes_from_rows(rows_re, rows_im, mag);
    double acc = 0.0;
    for (size_t i = 0; i < mag.size(); ++i) {
        const double diff = nominal_mag_[i] - mag[i];
        acc += diff * diff;
    }
    return 0.25 * cell_area_ * acc;
}

double DistortionEvaluator::eta_from_rows(std::span<const double> rows_re,
                                          std::span<const double> rows_im) const {
    if (energy_ <= 0.0)
        throw std::runtime_error("distortion evaluator: nominal pattern has zero energy");
    return objective_from_rows(rows_re, rows_im) / energy_;
}

double DistortionEvaluator::objective(std::span<const UavState> perturbed,
                                      std::span<const double> phase_error) const {
    if (perturbed.size() != nominal_.size())
        throw std::invalid_argument("distortion evaluator: perturbed length mismatch");
    if (!phase_error.empty() && phase_error.size() != nominal_.size())
        throw std::invalid_argument("distortion evaluator: phase_error length mismatch");
    std::vector<double> rows_re, rows_im;
    fill_rows(perturbed, phase_error, rows_re, rows_im);
    return objective_from_rows(rows_re, rows_im);
}

double DistortionEvaluator::eta(std::span<const UavState> perturbed,
                                std::span<const double> phase_error) const {
    if (energy_ <= 0.0)
        throw std::runtime_error("distortion evaluator: nominal pattern has zero energy");
    return objective(perturbed, phase_error) / energy_;
}

} // namespace uavbeam
