#include "uavbeam/selection.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <thread>

namespace uavbeam {

bool operator==(const Combination& a, const Combination& b) { return a.indices == b.indices; }

bool lex_less(const Combination& a, const Combination& b) {
    return std::lexicographical_compare(a.indices.begin(), a.indices.end(), b.indices.begin(),
                                        b.indices.end());
}

uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    uint64_t result = 1;
    for (int i = 1; i <= k; ++i) {
        const uint64_t num = uint64_t(n - k + i);
        // result * num / i is always integral; guard the multiply.
        if (result > std::numeric_limits<uint64_t>::max() / num)
            throw std::overflow_error("binomial: coefficient overflows 64 bits");
        result = result * num / uint64_t(i);
    }
    return result;
}

CombinationEnumerator::CombinationEnumerator(int n, int k) : n_(n), k_(k) {
    if (k < 1 || k > n)
        throw std::invalid_argument("combinations: require 1 <= k <= n");
    current_.resize(size_t(k));
    for (int i = 0; i < k; ++i) current_[size_t(i)] = i + 1;
}

CombinationEnumerator::CombinationEnumerator(int n, int k, uint64_t rank) : n_(n), k_(k) {
    if (k < 1 || k > n)
        throw std::invalid_argument("combinations: require 1 <= k <= n");
    current_ = combination_unrank(n, k, rank).indices;
}

bool CombinationEnumerator::next(Combination& out) {
    if (done_) return false;
    out.indices = current_;
    // Odometer advance: bump the rightmost index that still has headroom.
    int i = k_ - 1;
    while (i >= 0 && current_[size_t(i)] == n_ - (k_ - 1 - i)) --i;
    if (i < 0) {
        done_ = true;
    } else {
        ++current_[size_t(i)];
        for (int j = i + 1; j < k_; ++j) current_[size_t(j)] = current_[size_t(j - 1)] + 1;
    }
    return true;
}

Combination combination_unrank(int n, int k, uint64_t rank) {
    if (k < 1 || k > n)
        throw std::invalid_argument("combinations: require 1 <= k <= n");
    if (rank >= binomial(n, k))
        throw std::out_of_range("combination_unrank: rank out of range");
    Combination c;
    c.indices.reserve(size_t(k));
    int v = 1;
    for (int pos = 0; pos < k; ++pos) {
        while (true) {
            const uint64_t block = binomial(n - v, k - pos - 1);
            if (rank < block) break;
            rank -= block;
            ++v;
        }
        c.indices.push_back(v);
        ++v;
    }
    return c;
}

std::vector<Combination> enumerate_combinations(int n, int k) {
    std::vector<Combination> all;
    all.reserve(binomial(n, k));
    CombinationEnumerator en(n, k);
    Combination c;
    while (en.next(c)) all.push_back(c);
    return all;
}

namespace {

struct ChunkBest {
    double sinr_db = -std::numeric_limits<double>::infinity();
    Combination combo;
};

// F strictly greater wins; equal F keeps the lexicographically smaller
// combination. Chunks are scanned in lexicographic order, so within a chunk
// the first maximum encountered is already the lexicographic champion.
bool better(double sinr, const Combination& combo, const ChunkBest& best) {
    if (sinr > best.sinr_db) return true;
    if (sinr == best.sinr_db && !best.combo.indices.empty()) return lex_less(combo, best.combo);
    return false;
}

} // namespace

SelectionResult brute_force_select(std::span<const UavState> uavs,
                                   const ChannelRealization& channel, const Vec3& receiver,
                                   const InterferenceField& field, const FadingParams& params,
                                   int k, double tx_power, const ElementPattern& element,
                                   int threads) {
    const int n = int(uavs.size());
    if (channel.gains.size() != uavs.size())
        throw std::invalid_argument("brute_force_select: channel length mismatch");
    if (k < 1 || k > n)
        throw std::invalid_argument("brute_force_select: require 1 <= k <= N");

    const uint64_t total = binomial(n, k);

    auto scan = [&](uint64_t rank_begin, uint64_t rank_end, ChunkBest& best) {
        CombinationEnumerator en(n, k, rank_begin);
        Combination combo;
        std::vector<UavState> subset(static_cast<size_t>(k));
        std::vector<std::complex<double>> gains(static_cast<size_t>(k));
        for (uint64_t r = rank_begin; r < rank_end && en.next(combo); ++r) {
            for (int i = 0; i < k; ++i) {
                const size_t idx = size_t(combo.indices[size_t(i)] - 1);
                subset[size_t(i)] = uavs[idx];
                gains[size_t(i)] = channel.gains[idx];
            }
            double sinr;
            try {
                const auto w = BeamWeights::from_mrt(mrt_weights(gains));
                sinr = subset_sinr(subset, w, gains, receiver, field, params, tx_power, element)
                           .sinr_db;
            } catch (const std::invalid_argument&) {
                continue; // degenerate subset: counted by rank, cannot win
            }
            if (better(sinr, combo, best)) {
                best.sinr_db = sinr;
                best.combo = combo;
            }
        }
    };

    const int nthreads = std::max(1, threads);
    std::vector<ChunkBest> bests(static_cast<size_t>(nthreads));
    if (nthreads == 1 || total < 2 * uint64_t(nthreads)) {
        scan(0, total, bests[0]);
    } else {
        std::vector<std::thread> workers;
        const uint64_t chunk = (total + uint64_t(nthreads) - 1) / uint64_t(nthreads);
        for (int t = 0; t < nthreads; ++t) {
            const uint64_t begin = uint64_t(t) * chunk;
            const uint64_t end = std::min(total, begin + chunk);
            if (begin >= end) break;
            workers.emplace_back([&, begin, end, t] { scan(begin, end, bests[size_t(t)]); });
        }
        for (auto& w : workers) w.join();
    }

    SelectionResult result;
    result.evaluated_count = total;
    result.best_sinr_db = -std::numeric_limits<double>::infinity();
    for (const auto& b : bests) {
        if (b.combo.indices.empty()) continue;
        if (result.best.indices.empty() || b.sinr_db > result.best_sinr_db ||
            (b.sinr_db == result.best_sinr_db && lex_less(b.combo, result.best))) {
            result.best_sinr_db = b.sinr_db;
            result.best = b.combo;
        }
    }
    return result;
}

} // namespace uavbeam
