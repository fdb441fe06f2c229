#pragma once

#include <cstdint>
#include <optional>

#include "voxtdp/extremal.hpp"
#include "voxtdp/lattice.hpp"
#include "voxtdp/rational.hpp"

namespace voxtdp {

enum class BoundKind { exact, lower, heuristic_upper };

// A bound on the minimal k-separator size of a voxel set. Exact and
// heuristic-upper bounds carry a witness R with largest_cluster_size(V \ R)
// <= k and |R| == value.
struct SeparatorBound {
    std::int64_t value = 0;
    BoundKind kind = BoundKind::lower;
    std::optional<VoxelSet> witness;
};

struct ExactSeparatorOptions {
    std::size_t max_voxels = 22;
};

// Exact minimum separator by exhaustive enumeration of removal sets in
// increasing cardinality (lexicographic within each cardinality, so the
// witness is canonical). Throws when |V| exceeds the cap.
SeparatorBound exact_separator(const VoxelSet& v, std::int64_t k, const ExactSeparatorOptions& opt = {});

// r_k |V+| - |V+ \ V|; may be negative, callers clamp.
Rat plain_lower_bound(const VoxelSet& v, std::int64_t k, const RatioTable& table);

// max over pruning iterates of the ceiled plain bound, floored at the
// chi-positivity indicator; iterates until the pruned set is empty.
SeparatorBound pruned_lower_bound(const VoxelSet& v, std::int64_t k, const RatioTable& table);

// true iff r is a valid k-separator witness of v
bool verify_separator(const VoxelSet& v, const VoxelSet& r, std::int64_t k);

}  // namespace voxtdp
