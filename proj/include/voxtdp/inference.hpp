#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "voxtdp/extremal.hpp"
#include "voxtdp/heuristic.hpp"
#include "voxtdp/io.hpp"
#include "voxtdp/thresholds.hpp"
#include "voxtdp/volume.hpp"

namespace voxtdp {

enum class Sidedness { one_sided, two_sided_absolute, two_sided_split };
enum class SolverChoice { lower_only, heuristic, both };

// Threshold specification: give one of the two and calibrate the other from
// permutations, or pin both explicitly.
struct ThresholdSpec {
    std::optional<std::int64_t> extent;  // k_M
    std::optional<double> z;
};

struct AnalysisConfig {
    double alpha = 0.05;
    Sidedness sidedness = Sidedness::one_sided;
    ThresholdSpec threshold;
    SolverChoice solver = SolverChoice::both;
    SolveOptions solve;
    bool compute_upper = true;
    std::uint64_t seed = 0;
    int threads = 1;
};

// Strictly supra-threshold voxels inside the mask. two_sided_split is handled
// by the caller as two one-sided passes.
VoxelSet supra_threshold(const ZVolume& zvol, double z, Sidedness sidedness);

struct TdpLowerResult {
    std::int64_t numerator = 0;  // certified count of active voxels
    Rat tdp = Rat(0);
};
// Certified bound: sum of pruned separator bounds over the supra-threshold
// components of the region.
TdpLowerResult tdp_lower_bound(const VoxelSet& region, const VoxelSet& supra, std::int64_t k,
                               const RatioTable& table);

struct TdpHeuristicResult {
    std::int64_t numerator = 0;
    Rat tdp = Rat(0);
    bool certified = false;  // every component solved provably optimally
};
TdpHeuristicResult tdp_heuristic(const VoxelSet& region, const VoxelSet& supra, std::int64_t k,
                                 const SolveOptions& opt, std::uint64_t seed);

// Hard cap from the reduced-mask recalibration; needs permutation rows.
// Returns the bound and the recalibrated extent threshold.
struct TdpUpperResult {
    Rat tdp = Rat(0);
    std::int64_t numerator = 0;
    std::int64_t reduced_extent = 0;
};
TdpUpperResult tdp_upper_bound(const VoxelSet& region, const VoxelSet& supra, const VoxelSet& mask,
                               const PermutationMatrix& perms, double z, double alpha, const SolveOptions& opt,
                               std::uint64_t seed, int threads = 1);

struct RegionRow {
    std::string name;
    std::int64_t region_size = 0;  // |region ∩ M|
    std::int64_t overlap = 0;
    std::int64_t lb_numerator = 0;
    std::optional<std::int64_t> heur_numerator;
    Rat tdp_lb = Rat(0);
    std::optional<Rat> tdp_heur;
};

struct ClusterRow {
    std::string id;
    std::int64_t size = 0;
    Rat tdp_lb = Rat(0);
    std::optional<Rat> tdp_heur;
    std::optional<Rat> tdp_upper;
    bool certified = false;
    double z_max = 0.0;
    Coord peak;
    int direction = +1;  // -1 for the negative pass of a split analysis
    std::vector<RegionRow> regions;
};

struct ReportTotals {
    std::int64_t size = 0;
    Rat tdp_lb = Rat(0);
    std::optional<Rat> tdp_heur;
    std::vector<RegionRow> regions;
};

struct PassInfo {
    int direction = +1;
    double z_used = 0.0;
    std::int64_t extent_used = 0;
    std::optional<std::int64_t> reduced_extent;  // k on mask minus supra set
    std::uint32_t exhausted_perms = 0;
};

struct ClusterReport {
    double alpha = 0.05;
    Sidedness sidedness = Sidedness::one_sided;
    std::vector<PassInfo> passes;
    std::vector<ClusterRow> clusters;  // significant only, size descending
    ReportTotals totals;
    std::vector<RegionRow> queried;  // user-supplied regions, full-region TDP
    int dim = 0;
};

ClusterReport analyze(const ZVolume& zvol, const AnalysisConfig& cfg, const PermutationMatrix* perms,
                      const AtlasVolume* atlas, const std::vector<RegionSpec>& regions);

// report rendering (report.cpp)
std::string render_tsv(const ClusterReport& report);
std::string render_json(const ClusterReport& report);
std::string format_tdp(const Rat& value);  // three decimals

}  // namespace voxtdp
