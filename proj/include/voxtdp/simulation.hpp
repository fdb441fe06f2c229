#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "voxtdp/heuristic.hpp"
#include "voxtdp/volume.hpp"

namespace voxtdp {

enum class SignalLayout { focal, distributed };

// 2D smoothed Gaussian field experiment. Signal occupies exactly 716 pixels
// in both layouts; the z threshold follows z = z_coef * sqrt(n).
struct FieldConfig {
    std::array<std::int64_t, 2> dims{128, 128};
    double fwhm = 4.0;  // pixels; sigma = fwhm / sqrt(8 ln 2)
    int subjects = 20;
    double amplitude = 0.1;
    SignalLayout layout = SignalLayout::focal;
    int replications = 1000;
    int null_replications = 500;
    double alpha = 0.05;
    double z_coef = 0.348;
    std::uint64_t seed = 1;
    int threads = 1;
    SolveOptions solve;

    double sigma() const;
    double z_threshold() const;
};

// The true signal pixel set for the layout (716 pixels).
VoxelSet signal_mask(const FieldConfig& config);

// Smoothed one-sample z map for one replication (signal added per config).
ZVolume generate_field(const FieldConfig& config, std::int64_t replicate);

// Extent threshold from an independent null stream: the empirical
// (1-alpha)-quantile of the maximal supra-threshold cluster size.
std::int64_t calibrate_extent_null(const FieldConfig& config, double z);

struct SimResult {
    // config echo
    int subjects = 0;
    SignalLayout layout = SignalLayout::focal;
    double amplitude = 0.0;
    double z = 0.0;
    std::int64_t extent_threshold = 0;
    // aggregates
    std::int64_t replications = 0;
    std::int64_t lb_violations = 0;    // simultaneous event over clusters + fixed regions
    std::int64_t heur_violations = 0;  // measured anti-conservativeness of the heuristic
    double fwer = 0.0;
    double fwer_ci_lo = 0.0;
    double fwer_ci_hi = 0.0;
    double mean_tdp_lb = 0.0;    // average over significant clusters
    double mean_tdp_heur = 0.0;
    double mean_size_pct = 0.0;  // cluster size standardized by true signal size
    double mean_gap = 0.0;       // mean heuristic - lower bound TDP gap
    std::int64_t significant_clusters = 0;
};

SimResult run_experiment(const FieldConfig& config);

std::string sim_tsv_header();
std::string sim_tsv_row(const SimResult& r);

}  // namespace voxtdp
