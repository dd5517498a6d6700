#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "uavbeam/hover.hpp"

using namespace uavbeam;

TEST_CASE("all-zero spec gives the degenerate perturbation") {
    Rng rng(1);
    const auto p = sample_perturbation({}, rng);
    CHECK(p.displacement == Vec3{});
    CHECK(p.rotation.yaw == 0.0);
    CHECK(p.rotation.pitch == 0.0);
    CHECK(p.rotation.roll == 0.0);
}

TEST_CASE("displacement stays inside the tolerance and is centered") {
    HoverSpec spec;
    spec.dx_max = 0.05;
    Rng rng(99);
    double sum = 0.0, lo = 1.0, hi = -1.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
        const auto p = sample_perturbation(spec, rng);
        sum += p.displacement.x;
        lo = std::min(lo, p.displacement.x);
        hi = std::max(hi, p.displacement.x);
        // dy/dz bounds are zero: exact
        CHECK(p.displacement.y == 0.0);
        CHECK(p.displacement.z == 0.0);
    }
    CHECK(std::abs(sum / n) < 0.001);
    CHECK(lo >= -0.05);
    CHECK(hi <= 0.05);
}

TEST_CASE("rotation samples stay within +-10 degrees") {
    HoverSpec spec;
    spec.angle_max = 10.0 * kPi / 180.0;
    Rng rng(7);
    for (int i = 0; i < 20000; ++i) {
        const auto p = sample_perturbation(spec, rng);
        CHECK(std::abs(p.rotation.yaw) <= spec.angle_max);
        CHECK(std::abs(p.rotation.pitch) <= spec.angle_max);
        CHECK(std::abs(p.rotation.roll) <= spec.angle_max);
    }
}

TEST_CASE("boundedness holds exactly for random specs") {
    Rng meta(3);
    for (int trial = 0; trial < 20; ++trial) {
        HoverSpec spec;
        spec.dx_max = meta.uniform(0.0, 2.0);
        spec.dy_max = meta.uniform(0.0, 2.0);
        spec.dz_max = meta.uniform(0.0, 2.0);
        spec.angle_max = meta.uniform(0.0, kPi / 2);
        Rng rng(meta.next_u64());
        for (int i = 0; i < 2000; ++i) {
            const auto p = sample_perturbation(spec, rng);
            CHECK(std::abs(p.displacement.x) <= spec.dx_max);
            CHECK(std::abs(p.displacement.y) <= spec.dy_max);
            CHECK(std::abs(p.displacement.z) <= spec.dz_max);
            CHECK(std::abs(p.rotation.roll) <= spec.angle_max);
        }
    }
}

TEST_CASE("same seed reproduces the perturbation sequence") {
    HoverSpec spec;
    spec.dx_max = 0.3;
    spec.angle_max = 0.1;
    Rng a(1234), b(1234);
    for (int i = 0; i < 100; ++i) {
        const auto pa = sample_perturbation(spec, a);
        const auto pb = sample_perturbation(spec, b);
        CHECK(pa.displacement == pb.displacement);
        CHECK(pa.rotation.yaw == pb.rotation.yaw);
        CHECK(pa.rotation.pitch == pb.rotation.pitch);
        CHECK(pa.rotation.roll == pb.rotation.roll);
    }
}

TEST_CASE("empirical variance matches (2*bound)^2 / 12") {
    HoverSpec spec;
    spec.dx_max = 0.25;
    Rng rng(5);
    const int n = 100000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = sample_perturbation(spec, rng).displacement.x;
        sum += x;
        sum_sq += x * x;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    const double expected = (2 * 0.25) * (2 * 0.25) / 12.0;
    CHECK(std::abs(var - expected) / expected < 0.05);
}

TEST_CASE("tolerance_fraction resolves against the spacing") {
    HoverSpec spec;
    spec.tolerance_fraction = 0.30;
    const auto resolved = spec.resolved(2.0);
    CHECK(resolved.dx_max == doctest::Approx(0.6));
    CHECK(resolved.dy_max == doctest::Approx(0.6));
    CHECK(resolved.dz_max == doctest::Approx(0.6));
    CHECK_FALSE(resolved.tolerance_fraction.has_value());
}

TEST_CASE("apply_hover: zero perturbations leave states unchanged") {
    const auto states = build_grid_layout({4, 1, 1, 1.0, {0, 0, 30}});
    const std::vector<Perturbation> zero(4);
    const auto out = apply_hover(states, zero);
    for (size_t i = 0; i < out.size(); ++i) CHECK(out[i].position == states[i].position);
}

TEST_CASE("apply_hover: additive displacement") {
    std::vector<UavState> states(1);
    states[0].position = {0, 0, 30};
    std::vector<Perturbation> p(1);
    p[0].displacement = {0.01, 0, 0};
    const auto out = apply_hover(states, p);
    CHECK(out[0].position == Vec3{0.01, 0, 30});
}

TEST_CASE("apply_hover keeps every perturbed axis within the draw bound") {
    const auto states = build_grid_layout({4, 1, 1, 1.0, {0, 0, 30}});
    HoverSpec spec;
    spec.dx_max = spec.dy_max = spec.dz_max = 0.05;
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto out = apply_hover(states, sample_perturbations(spec, states.size(), rng));
        for (size_t i = 0; i < out.size(); ++i) {
            CHECK(std::abs(out[i].position.x - states[i].position.x) <= 0.05);
            CHECK(std::abs(out[i].position.y - states[i].position.y) <= 0.05);
            CHECK(std::abs(out[i].position.z - states[i].position.z) <= 0.05);
        }
    }
}

TEST_CASE("apply_hover rejects mismatched lengths") {
    const auto states = build_grid_layout({2, 1, 1, 1.0, {}});
    const std::vector<Perturbation> p(3);
    CHECK_THROWS_AS(apply_hover(states, p), std::invalid_argument);
}
