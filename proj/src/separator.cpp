#include "voxtdp/separator.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace voxtdp {

namespace {

// chi of the voxels selected by `mask`, with adjacency given as bitmasks;
// early exit once some component exceeds `limit`.
bool chi_at_most(const std::vector<std::uint32_t>& adj, std::uint32_t mask, std::int64_t limit) {
    std::uint32_t remaining = mask;
    while (remaining) {
        std::uint32_t comp = remaining & (~remaining + 1);  // lowest set bit
        for (;;) {
            std::uint32_t grown = comp;
            std::uint32_t scan = comp;
            while (scan) {
                int b = std::countr_zero(scan);
                scan &= scan - 1;
                grown |= adj[b] & mask;
            }
            if (grown == comp) break;
            comp = grown;
        }
        if (std::popcount(comp) > limit) return false;
        remaining &= ~comp;
    }
    return true;
}

}  // namespace

bool verify_separator(const VoxelSet& v, const VoxelSet& r, std::int64_t k) {
    if (!is_subset(r, v)) return false;
    return largest_cluster_size(set_difference(v, r)) <= k;
}

SeparatorBound exact_separator(const VoxelSet& v, std::int64_t k, const ExactSeparatorOptions& opt) {
    if (k < 0) throw std::invalid_argument("exact_separator: negative k");
    if (v.size() > opt.max_voxels) throw std::invalid_argument("exact_separator: voxel count exceeds cap");
    SeparatorBound out;
    out.kind = BoundKind::exact;
    if (v.empty() || static_cast<std::int64_t>(v.size()) <= k) {
        out.value = 0;
        out.witness = VoxelSet(v.dim());
        return out;
    }
    if (k == 0) {  // chi <= 0 forces removing everything
        out.value = static_cast<std::int64_t>(v.size());
        out.witness = v;
        return out;
    }

    const int n = static_cast<int>(v.size());
    const auto& vox = v.voxels();
    std::vector<std::uint32_t> adj(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (are_neighbors(vox[i], vox[j])) {
                adj[i] |= 1u << j;
                adj[j] |= 1u << i;
            }
    const std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1;

    std::vector<int> pick;
    for (int r = 0; r <= n; ++r) {
        pick.resize(r);
        for (int i = 0; i < r; ++i) pick[i] = i;
        for (;;) {
            std::uint32_t removed = 0;
            for (int i : pick) removed |= 1u << i;
            if (chi_at_most(adj, full & ~removed, k)) {
                std::vector<Coord> w;
                for (int i : pick) w.push_back(vox[i]);
                out.value = r;
                out.witness = VoxelSet::of(v.dim(), std::move(w));
                return out;
            }
            // next lexicographic r-combination of {0..n-1}
            int i = r - 1;
            while (i >= 0 && pick[i] == n - r + i) --i;
            if (i < 0) break;
            ++pick[i];
            for (int j = i + 1; j < r; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    // unreachable: removing all voxels always separates
    throw std::logic_error("exact_separator: enumeration exhausted");
}

Rat plain_lower_bound(const VoxelSet& v, std::int64_t k, const RatioTable& table) {
    if (v.empty()) return Rat(0);
    VoxelSet cov = cover(v);
    const std::int64_t cov_size = static_cast<std::int64_t>(cov.size());
    const std::int64_t margin = cov_size - static_cast<std::int64_t>(v.size());
    return table.ratio(k) * Rat(cov_size) - Rat(margin);
}

SeparatorBound pruned_lower_bound(const VoxelSet& v, std::int64_t k, const RatioTable& table) {
    SeparatorBound out;
    out.kind = BoundKind::lower;
    std::int64_t best = largest_cluster_size(v) > k ? 1 : 0;
    // maintain the interior iterate; re-cover i times at each step
    VoxelSet core = v;
    for (int i = 0; !core.empty(); ++i) {
        VoxelSet pruned = core;
        for (int j = 0; j < i && !pruned.empty(); ++j) pruned = cover(pruned);
        if (!pruned.empty()) best = std::max(best, rat_ceil(plain_lower_bound(pruned, k, table)));
        core = interior(core);
    }
    out.value = std::max<std::int64_t>(best, 0);
    return out;
}

}  // namespace voxtdp
