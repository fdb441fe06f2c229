#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "voxtdp/lattice.hpp"

namespace voxtdp {

// N rows of z-scores over a fixed voxel indexing of the mask; row 0 holds the
// observed data (identity permutation).
struct PermutationMatrix {
    std::uint64_t voxel_count = 0;  // m
    std::uint32_t n_perm = 0;       // N
    std::vector<float> values;      // row-major, N * m

    std::span<const float> row(std::uint32_t j) const {
        return {values.data() + static_cast<std::size_t>(j) * voxel_count, voxel_count};
    }
};

// 26-connectivity neighbor lists over an indexed mask (CSR layout).
struct MaskAdjacency {
    std::vector<Coord> voxels;  // index -> coordinate, defines the indexing
    std::vector<std::int32_t> nbr_begin;
    std::vector<std::int32_t> nbr;

    std::size_t size() const { return voxels.size(); }
    std::span<const std::int32_t> neighbors(std::int32_t i) const {
        return {nbr.data() + nbr_begin[i], static_cast<std::size_t>(nbr_begin[i + 1] - nbr_begin[i])};
    }
};

// Voxel indexing is the sorted coordinate order of the mask.
MaskAdjacency build_adjacency(const VoxelSet& mask);

enum class CalibrationMode { fix_k, fix_z };

struct Calibration {
    CalibrationMode mode = CalibrationMode::fix_k;
    double alpha = 0.05;
    std::uint32_t quantile_index = 0;  // 1-based ceil(N (1 - alpha))
    // fix_k result: z threshold (may be -inf when permutations exhaust)
    double z_threshold = -std::numeric_limits<double>::infinity();
    // fix_z result: extent threshold
    std::int64_t extent_threshold = 0;
    std::vector<double> stats;              // per-permutation Z[j] or K[j]
    std::vector<std::uint32_t> exhausted;   // permutations that never exceeded k (fix_k only)
};

using RowSource = std::function<void(std::uint32_t j, std::span<float> out)>;

// z threshold for a given cluster extent threshold: per permutation, insert
// voxels in descending z order into a union-find until a component exceeds k;
// the quantile of those z values is the threshold.
Calibration find_z_for_k(std::uint64_t m, std::uint32_t n_perm, const RowSource& rows, const MaskAdjacency& adj,
                         std::int64_t k, double alpha, int threads = 1);
Calibration find_z_for_k(const PermutationMatrix& perms, const MaskAdjacency& adj, std::int64_t k, double alpha,
                         int threads = 1);

// cluster extent threshold for a given z threshold: per permutation, the
// largest supra-threshold component size; the quantile of those sizes is the
// threshold.
Calibration find_k_for_z(std::uint64_t m, std::uint32_t n_perm, const RowSource& rows, const MaskAdjacency& adj,
                         double z, double alpha, int threads = 1);
Calibration find_k_for_z(const PermutationMatrix& perms, const MaskAdjacency& adj, double z, double alpha,
                         int threads = 1);

}  // namespace voxtdp
