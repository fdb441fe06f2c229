#pragma once

#include <cstdint>
#include <vector>

#include "voxtdp/separator.hpp"
#include "voxtdp/tiling.hpp"

namespace voxtdp {

// Tuning knobs for the cluster-growing search. Budgets are deterministic
// operation counts (voxel insertions / proposals), never wall clock, so a
// fixed seed reproduces results exactly.
struct HeuristicParams {
    struct Phase1 {
        std::int64_t runs = 1000;       // restarts
        int candidates = 5;             // clusters grown per insertion
        std::int64_t missing = 10;      // allowed shortfall below k in target sizes
        std::int64_t step = 2;          // shortfall step
        std::int64_t insertion_budget = 300000;
    } phase1;
    struct Phase2 {
        std::int64_t big_runs = 1000000;  // outer repetitions cap
        int stall = 3;                    // consecutive non-improvements that end a region
        int clusters = 4;                 // neighbouring clusters freed per attempt
        std::int64_t insertion_budget = 300000;
    } phase2;
    AnnealParams sa;
};

// Two-phase cluster growing; returns a separator with witness. Deterministic
// given the seed.
SeparatorBound two_phase_separator(const VoxelSet& v, std::int64_t k, const HeuristicParams& params,
                                   std::uint64_t seed);

// Rectangle instance with known optimal separator: sides (n+1)c_i - 1,
// extent threshold n^d, optimum |box| - n^d * prod(c).
struct HyperrectInstance {
    VoxelSet box;
    std::int64_t k = 0;
    std::int64_t optimal = 0;
};
HyperrectInstance hyperrect_instance(std::int64_t n, const std::vector<std::int64_t>& c);
// The regular grid separator achieving the optimum (voxels with some
// coordinate divisible by n+1, 1-based box).
VoxelSet hyperrect_grid_separator(std::int64_t n, const std::vector<std::int64_t>& c);

struct SolveOptions {
    HeuristicParams params;
    std::size_t exact_cap = 22;  // components at or below this size are solved exactly
    bool run_anneal = true;
};

struct SolveResult {
    SeparatorBound bound;  // exact or heuristic_upper, always with witness
    bool certified = false;  // true when every component was solved provably optimally
};

// Production entry point: decompose into components, solve small ones
// exactly, run two-phase + annealing on the rest, early-stopping at the
// certified lower bound.
SolveResult solve_separator(const VoxelSet& v, std::int64_t k, const SolveOptions& opt, std::uint64_t seed);

}  // namespace voxtdp
