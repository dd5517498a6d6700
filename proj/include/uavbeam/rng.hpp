#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace uavbeam {

/// Seeded random source with portable variate generation. The engine is
/// std::mt19937_64 (bit-exact by the standard); uniform and normal variates
/// are derived here rather than through std::*_distribution, whose output is
/// implementation-defined. Same seed, same platform-independent stream.
class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    /// Uniform double in [0, 1) with 53-bit resolution.
    double uniform01() { return double(eng_() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi). lo == hi returns lo exactly.
    double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

    /// Standard normal via Box-Muller; the cosine/sine pair is cached so
    /// consecutive calls consume uniforms in a fixed pattern.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 == 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Uniform integer in [0, n). n must be nonzero.
    uint64_t below(uint64_t n) {
        return uint64_t((static_cast<unsigned __int128>(eng_()) * n) >> 64);
    }

  private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// FNV-1a 64-bit hash of a stream tag.
inline uint64_t hash_tag(std::string_view tag) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : tag) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

/// Derives an independent per-module seed from a master seed and a stream
/// tag (splitmix64 finalizer over master ^ fnv1a(tag)). Adding a new stream
/// never perturbs existing ones.
inline uint64_t derive_seed(uint64_t master, std::string_view tag) {
    uint64_t z = master ^ hash_tag(tag);
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace uavbeam
