#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "voxtdp/lattice.hpp"
#include "voxtdp/rational.hpp"

namespace voxtdp {

// Extremal box decomposition of k in dimension d: b is the largest product
// q^(d-l) (q+1)^l not exceeding k, with q the integer d-th root of k. Found by
// integer search, never by the floating-point log formula, so boundary cases
// (exact powers, q = 1) are exact.
struct BoxCounts {
    int d = 0;
    std::int64_t k = 0;
    std::int64_t l = 0;
    std::int64_t b = 0;
    std::int64_t b_plus = 0;
};

BoxCounts box_counts(int d, std::int64_t k);  // d >= 1, k >= 1

// floor(k^(1/d)) by exact integer search
std::int64_t integer_root(std::int64_t k, int d);

// Minimum cover size over all k-point sets in Z^d.
std::int64_t min_cover_size(int d, std::int64_t k);

// A witness set of k voxels whose cover has exactly min_cover_size(d, k)
// members (nested in k).
VoxelSet min_cover_witness(int d, std::int64_t k);

// Cached edge ratios per dimension: ratio(k) is the optimal shave/size ratio
// over sets with interior at most k (equals 1 at k = 0 and decreases);
// fraction_cap(k) bounds any minimal separator by fraction_cap(k) * |V|.
class RatioTable {
public:
    RatioTable(int d, std::int64_t k_max);

    int dim() const { return d_; }
    std::int64_t k_max() const { return static_cast<std::int64_t>(ratio_.size()) - 1; }
    Rat ratio(std::int64_t k) const;         // r_k, 0 <= k <= k_max
    Rat fraction_cap(std::int64_t k) const;  // r~_k, 1 <= k <= k_max
    std::int64_t cover_min(std::int64_t k) const;

private:
    int d_;
    std::vector<std::int64_t> f_;
    std::vector<Rat> ratio_;
    std::vector<Rat> cap_;
};

// Largest TDP the certified lower bound can report for a cluster of the given
// size at extent threshold k_M; exact rational in [0, 1].
Rat max_achievable_tdp(const RatioTable& table, std::int64_t k_extent, std::int64_t cluster_size);
Rat max_achievable_tdp(int d, std::int64_t k_extent, std::int64_t cluster_size);

// Smallest cluster size whose ratio(.) drops to the level required for the
// target TDP; nullopt when no size achieves it.
std::optional<std::int64_t> min_cluster_size_for_tdp(int d, std::int64_t k_extent, const Rat& target);

}  // namespace voxtdp
