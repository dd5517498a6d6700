#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uavbeam/channel.hpp"
#include "uavbeam/interference.hpp"

namespace uavbeam {

/// K strictly increasing 1-based UAV indices.
struct Combination {
    std::vector<int> indices;
};

bool operator==(const Combination& a, const Combination& b);
bool lex_less(const Combination& a, const Combination& b);

/// Binomial coefficient with overflow detection (throws std::overflow_error).
uint64_t binomial(int n, int k);

/// Streams all C(n, k) combinations of {1..n} in lexicographic order.
class CombinationEnumerator {
  public:
    CombinationEnumerator(int n, int k); // throws if k < 1 or k > n
    /// Starts mid-sequence at the given lexicographic rank.
    CombinationEnumerator(int n, int k, uint64_t rank);
    bool next(Combination& out); // false once exhausted

  private:
    int n_;
    int k_;
    bool done_ = false;
    std::vector<int> current_;
};

/// Combination at the given lexicographic rank (combinatorial number system).
Combination combination_unrank(int n, int k, uint64_t rank);

/// All combinations materialized; intended for small n.
std::vector<Combination> enumerate_combinations(int n, int k);

struct SelectionResult {
    Combination best;            // empty if every subset had a degenerate channel
    double best_sinr_db = 0.0;   // -inf in the degenerate case
    uint64_t evaluated_count = 0;
};

/// Exhaustive search over all C(N, k) subsets maximizing subset SINR. Per
/// combination: gather the channel gains, form MRT weights, score with
/// subset_sinr, keep the maximum; ties go to the lexicographically smallest
/// combination so parallel runs match the serial scan. Subsets whose channel
/// vector is all-zero are skipped (they cannot beat any finite SINR) but
/// still counted.
SelectionResult brute_force_select(std::span<const UavState> uavs,
                                   const ChannelRealization& channel, const Vec3& receiver,
                                   const InterferenceField& field, const FadingParams& params,
                                   int k, double tx_power = 1.0,
                                   const ElementPattern& element = {}, int threads = 1);

} // namespace uavbeam
