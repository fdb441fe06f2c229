#pragma once

#include <cstdint>
#include <vector>

#include "voxtdp/lattice.hpp"
#include "voxtdp/rng.hpp"
#include "voxtdp/separator.hpp"

namespace voxtdp {

// Indexed geometry of a voxel set V and its cover V+. All heuristic search
// runs on these integer indices; coordinates only appear at the boundaries.
class CoverGeometry {
public:
    explicit CoverGeometry(const VoxelSet& v);

    int dim() const { return dim_; }
    std::int32_t offsets() const { return n_off_; }  // 2^d
    std::int32_t cover_size() const { return static_cast<std::int32_t>(coords_.size()); }
    std::int64_t base_size() const { return base_size_; }
    bool in_base(std::int32_t ci) const { return in_base_[ci] != 0; }
    const Coord& coord(std::int32_t ci) const { return coords_[ci]; }
    std::int32_t index_of(const Coord& c) const;  // -1 when outside the cover

    // positive / negative neighbor at offset m in {0,1}^d (bit i = +1 in dim i);
    // -1 when the neighbor falls outside the cover
    std::int32_t positive(std::int32_t ci, std::int32_t m) const { return pos_[static_cast<std::size_t>(ci) * n_off_ + m]; }
    std::int32_t negative(std::int32_t ci, std::int32_t m) const { return neg_[static_cast<std::size_t>(ci) * n_off_ + m]; }

    std::span<const std::int32_t> neighbors(std::int32_t ci) const {  // 26-connectivity within the cover
        return {nbr_.data() + nbr_begin_[ci], static_cast<std::size_t>(nbr_begin_[ci + 1] - nbr_begin_[ci])};
    }

    const VoxelSet& base() const { return base_; }
    VoxelSet to_voxel_set(const std::vector<std::int32_t>& cover_indices) const;

private:
    int dim_;
    std::int32_t n_off_;
    std::int64_t base_size_;
    VoxelSet base_;
    std::vector<Coord> coords_;
    std::vector<std::uint8_t> in_base_;
    std::vector<std::int32_t> pos_, neg_;
    std::vector<std::int32_t> nbr_begin_, nbr_;
};

// A partition of the cover into tiles, with the separator target
//   t = sum |T^0 cap V| + sum (|T^- cap V| - k)_+
// maintained incrementally under single-voxel reassignment.
class TilingState {
public:
    static constexpr std::int32_t new_tile = -2;

    TilingState(const CoverGeometry& geo, std::int64_t k, std::vector<std::int32_t> tile_of);
    // Lemma "R to T" construction: tiles are covers of the components of
    // V \ R, remainder cover components become extra tiles.
    static TilingState from_separator(const CoverGeometry& geo, std::int64_t k, const VoxelSet& r);
    // every cover voxel its own tile
    static TilingState singletons(const CoverGeometry& geo, std::int64_t k);

    const CoverGeometry& geometry() const { return *geo_; }
    std::int64_t k() const { return k_; }
    std::int64_t target() const { return t_; }
    std::int64_t recompute_target() const;  // from scratch, for audits

    std::int32_t tile_of(std::int32_t ci) const { return tile_of_[ci]; }
    const std::vector<std::int32_t>& assignment() const { return tile_of_; }
    std::int64_t interior_in_base(std::int32_t tile) const { return interior_count_[tile]; }

    struct Move {
        std::int32_t voxel;
        std::int32_t to;  // tile id or new_tile
    };
    std::int64_t peek(const Move& m) const;  // target after the move, no mutation
    void apply(const Move& m);

    // Lemma "T to R" construction: shaves plus per-tile interior excess.
    VoxelSet to_separator() const;

private:
    void rebuild_counts();

    const CoverGeometry* geo_;
    std::int64_t k_ = 0;
    std::int64_t t_ = 0;
    std::vector<std::int32_t> tile_of_;
    std::vector<std::uint8_t> is_interior_;       // base voxels only
    std::vector<std::int64_t> interior_count_;    // per tile: |T^- cap V|
    std::vector<std::int64_t> shave_count_;       // per tile: |T^0 cap V|
    std::vector<std::int64_t> population_;        // per tile: |T|
    std::vector<std::int32_t> free_ids_;
};

std::int64_t tiling_target(const TilingState& t);  // t_k of the current state

// target-preserving witness extraction; result verifies
// largest_cluster_size(V \ R) <= k with |R| == target
SeparatorBound tiling_to_separator(const TilingState& t);

TilingState separator_to_tiling(const CoverGeometry& geo, const VoxelSet& v, const VoxelSet& r, std::int64_t k);

struct AnnealParams {
    double tuning = 2.0;                 // tp in the acceptance rule 1 / i^((t'-t)/tp)
    std::int64_t stall_iters = 100000;   // stop after this many non-improving iterations
    std::int64_t max_proposals = 2000000;
};

// Simulated annealing over tilings starting from a separator witness; returns
// a bound never worse than the start. A certified lower bound, when given,
// allows early exit at proven optimality.
SeparatorBound anneal_separator(const VoxelSet& v, std::int64_t k, const SeparatorBound& start,
                                const AnnealParams& params, std::uint64_t seed,
                                std::int64_t certified_lower = 0);

}  // namespace voxtdp
