#include "voxtdp/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace voxtdp {

namespace {

// |region| as TDP denominator; zero-size regions report TDP 0
Rat tdp_of(std::int64_t numerator, std::int64_t region_size) {
    if (region_size == 0) return Rat(0);
    return Rat(numerator, region_size);
}

struct PassData {
    int direction = +1;
    double z = 0.0;
    std::int64_t k = 0;
    VoxelSet supra;  // Z ∩ M for this pass
    std::optional<std::int64_t> reduced_k;
    std::uint32_t exhausted = 0;
};

// named regions resolved against mask
struct NamedRegion {
    std::string name;
    VoxelSet voxels;  // ⊆ M
    bool queried = false;
};

}  // namespace

VoxelSet supra_threshold(const ZVolume& zvol, double z, Sidedness sidedness) {
    if (std::isnan(z)) throw std::invalid_argument("supra_threshold: z is NaN");
    std::vector<Coord> pts;
    for (const Coord& c : zvol.mask.voxels()) {
        const double v = zvol.at(c);
        const bool in = sidedness == Sidedness::two_sided_absolute ? std::fabs(v) > z : v > z;
        if (in) pts.push_back(c);
    }
    return VoxelSet::of(zvol.shape.dim(), std::move(pts));
}

TdpLowerResult tdp_lower_bound(const VoxelSet& region, const VoxelSet& supra, std::int64_t k,
                               const RatioTable& table) {
    TdpLowerResult out;
    VoxelSet active = set_intersection(region, supra);
    if (active.empty()) {
        out.tdp = tdp_of(0, static_cast<std::int64_t>(region.size()));
        return out;
    }
    for (const VoxelSet& comp : connected_components(active).clusters)
        out.numerator += pruned_lower_bound(comp, k, table).value;
    out.tdp = tdp_of(out.numerator, static_cast<std::int64_t>(region.size()));
    return out;
}

TdpHeuristicResult tdp_heuristic(const VoxelSet& region, const VoxelSet& supra, std::int64_t k,
                                 const SolveOptions& opt, std::uint64_t seed) {
    TdpHeuristicResult out;
    VoxelSet active = set_intersection(region, supra);
    SolveResult solved = solve_separator(active, k, opt, seed);
    out.numerator = solved.bound.value;
    out.certified = solved.certified;
    out.tdp = tdp_of(out.numerator, static_cast<std::int64_t>(region.size()));
    return out;
}

TdpUpperResult tdp_upper_bound(const VoxelSet& region, const VoxelSet& supra, const VoxelSet& mask,
                               const PermutationMatrix& perms, double z, double alpha, const SolveOptions& opt,
                               std::uint64_t seed, int threads) {
    TdpUpperResult out;
    VoxelSet reduced = set_difference(mask, supra);
    if (reduced.empty()) {
        out.reduced_extent = 0;  // empty-mask convention
    } else {
        // restrict permutation rows to the surviving voxel indices
        std::vector<std::uint32_t> keep;
        keep.reserve(reduced.size());
        const auto& mv = mask.voxels();
        std::size_t mi = 0;
        for (const Coord& c : reduced.voxels()) {
            while (mi < mv.size() && mv[mi] < c) ++mi;
            keep.push_back(static_cast<std::uint32_t>(mi));
        }
        MaskAdjacency adj = build_adjacency(reduced);
        auto rows = [&](std::uint32_t j, std::span<float> dst) {
            auto full = perms.row(j);
            for (std::size_t i = 0; i < keep.size(); ++i) dst[i] = full[keep[i]];
        };
        Calibration cal =
            find_k_for_z(reduced.size(), perms.n_perm, rows, adj, z, alpha, threads);
        out.reduced_extent = cal.extent_threshold;
    }
    VoxelSet active = set_intersection(region, supra);
    // the upper direction needs an exact value or an overestimate of the
    // separator; the heuristic witness path provides exactly that
    SolveResult solved = solve_separator(active, out.reduced_extent, opt, seed);
    out.numerator = solved.bound.value;
    out.tdp = tdp_of(out.numerator, static_cast<std::int64_t>(region.size()));
    return out;
}

namespace {

PassData run_pass(const ZVolume& zvol, const AnalysisConfig& cfg, const PermutationMatrix* perms, int direction,
                  double pass_alpha) {
    PassData pass;
    pass.direction = direction;

    // per-pass view of the data: negate for the negative split direction
    ZVolume view = zvol;
    if (direction < 0 || cfg.sidedness == Sidedness::two_sided_absolute) {
        for (auto& v : view.values) {
            if (direction < 0) v = -v;
            if (cfg.sidedness == Sidedness::two_sided_absolute) v = std::fabs(v);
        }
    }

    const bool have_k = cfg.threshold.extent.has_value();
    const bool have_z = cfg.threshold.z.has_value();
    if (!have_k && !have_z) throw std::invalid_argument("analyze: threshold spec needs extent or z");
    if ((!have_k || !have_z) && perms == nullptr)
        throw std::invalid_argument("analyze: calibration requires a permutation matrix");

    if (have_k && have_z) {
        pass.k = *cfg.threshold.extent;
        pass.z = *cfg.threshold.z;
    } else {
        MaskAdjacency adj = build_adjacency(view.mask);
        if (perms->voxel_count != view.mask.size())
            throw std::invalid_argument("analyze: permutation matrix does not match mask size");
        auto rows = [&](std::uint32_t j, std::span<float> dst) {
            auto full = perms->row(j);
            for (std::size_t i = 0; i < dst.size(); ++i) {
                float v = full[i];
                if (direction < 0) v = -v;
                if (cfg.sidedness == Sidedness::two_sided_absolute) v = std::fabs(v);
                dst[i] = v;
            }
        };
        if (have_k) {
            pass.k = *cfg.threshold.extent;
            Calibration cal =
                find_z_for_k(view.mask.size(), perms->n_perm, rows, adj, pass.k, pass_alpha, cfg.threads);
            pass.z = cal.z_threshold;
            pass.exhausted = static_cast<std::uint32_t>(cal.exhausted.size());
        } else {
            pass.z = *cfg.threshold.z;
            Calibration cal =
                find_k_for_z(view.mask.size(), perms->n_perm, rows, adj, pass.z, pass_alpha, cfg.threads);
            pass.k = cal.extent_threshold;
        }
    }
    pass.supra = supra_threshold(view, pass.z,
                                 cfg.sidedness == Sidedness::two_sided_absolute ? Sidedness::two_sided_absolute
                                                                                : Sidedness::one_sided);
    return pass;
}

}  // namespace

ClusterReport analyze(const ZVolume& zvol, const AnalysisConfig& cfg, const PermutationMatrix* perms,
                      const AtlasVolume* atlas, const std::vector<RegionSpec>& regions) {
    zvol.validate();
    if (atlas && !(atlas->shape == zvol.shape)) throw std::invalid_argument("analyze: atlas shape mismatch");

    ClusterReport report;
    report.alpha = cfg.alpha;
    report.sidedness = cfg.sidedness;
    report.dim = zvol.shape.dim();

    std::vector<PassData> passes;
    if (cfg.sidedness == Sidedness::two_sided_split) {
        passes.push_back(run_pass(zvol, cfg, perms, +1, cfg.alpha / 2));
        passes.push_back(run_pass(zvol, cfg, perms, -1, cfg.alpha / 2));
    } else {
        passes.push_back(run_pass(zvol, cfg, perms, +1, cfg.alpha));
    }

    // resolve named regions once (atlas labels clipped to the mask)
    std::vector<NamedRegion> named;
    if (atlas) {
        for (std::uint16_t label : atlas->present_labels()) {
            NamedRegion r;
            r.name = atlas->name_of(label);
            r.voxels = set_intersection(atlas->region(label), zvol.mask);
            if (!r.voxels.empty()) named.push_back(std::move(r));
        }
    }
    for (const RegionSpec& spec : regions) {
        NamedRegion r;
        r.name = spec.name;
        r.queried = true;
        VoxelSet v(zvol.shape.dim());
        if (spec.voxels) v = *spec.voxels;
        if (atlas)
            for (std::uint16_t label : spec.atlas_labels) v = set_union(v, atlas->region(label));
        r.voxels = set_intersection(v, zvol.mask);
        named.push_back(std::move(r));
    }

    const bool want_heur = cfg.solver != SolverChoice::lower_only;
    std::int64_t max_cluster = 1;
    for (const PassData& pass : passes) max_cluster = std::max(max_cluster, largest_cluster_size(pass.supra));
    RatioTable table(zvol.shape.dim(), std::max<std::int64_t>({1, passes[0].k, max_cluster}));

    struct Sig {
        const PassData* pass;
        VoxelSet voxels;
    };
    std::vector<Sig> significant;
    for (const PassData& pass : passes) {
        for (const VoxelSet& comp : connected_components(pass.supra).clusters) {
            if (static_cast<std::int64_t>(comp.size()) > pass.k)
                significant.push_back({&pass, comp});
        }
    }
    std::sort(significant.begin(), significant.end(), [](const Sig& a, const Sig& b) {
        if (a.voxels.size() != b.voxels.size()) return a.voxels.size() > b.voxels.size();
        return a.voxels.voxels().front() < b.voxels.voxels().front();
    });

    // reduced-mask recalibration once per pass; every cluster upper bound in
    // the pass shares the same k
    std::vector<std::optional<std::int64_t>> reduced_k(passes.size());
    if (cfg.compute_upper && perms != nullptr) {
        for (std::size_t pi = 0; pi < passes.size(); ++pi) {
            const PassData& pass = passes[pi];
            VoxelSet reduced = set_difference(zvol.mask, pass.supra);
            if (reduced.empty()) {
                reduced_k[pi] = 0;
                continue;
            }
            std::vector<std::uint32_t> keep;
            keep.reserve(reduced.size());
            const auto& mv = zvol.mask.voxels();
            std::size_t mi = 0;
            for (const Coord& c : reduced.voxels()) {
                while (mi < mv.size() && mv[mi] < c) ++mi;
                keep.push_back(static_cast<std::uint32_t>(mi));
            }
            MaskAdjacency adj = build_adjacency(reduced);
            auto rows = [&](std::uint32_t j, std::span<float> dst) {
                auto full = perms->row(j);
                for (std::size_t i = 0; i < keep.size(); ++i) {
                    float v = full[keep[i]];
                    if (pass.direction < 0) v = -v;
                    if (cfg.sidedness == Sidedness::two_sided_absolute) v = std::fabs(v);
                    dst[i] = v;
                }
            };
            double pass_alpha = cfg.sidedness == Sidedness::two_sided_split ? cfg.alpha / 2 : cfg.alpha;
            Calibration cal =
                find_k_for_z(reduced.size(), perms->n_perm, rows, adj, pass.z, pass_alpha, cfg.threads);
            reduced_k[pi] = cal.extent_threshold;
        }
    }

    std::uint64_t cluster_stream = 0;
    std::int64_t total_lb = 0, total_heur = 0, total_size = 0;
    bool any_heur = false;

    for (const Sig& sig : significant) {
        ++cluster_stream;
        const PassData& pass = *sig.pass;
        ClusterRow row;
        row.direction = pass.direction;
        row.size = static_cast<std::int64_t>(sig.voxels.size());
        row.id = std::to_string(cluster_stream);
        if (cfg.sidedness == Sidedness::two_sided_split)
            row.id = (pass.direction > 0 ? "+" : "-") + row.id;

        // peak statistic in the original (signed) values
        row.z_max = -std::numeric_limits<double>::infinity();
        for (const Coord& c : sig.voxels.voxels()) {
            double v = zvol.at(c);
            if (cfg.sidedness == Sidedness::two_sided_absolute) v = std::fabs(v);
            if (pass.direction < 0) v = -v;
            if (v > row.z_max) {
                row.z_max = v;
                row.peak = c;
            }
        }

        TdpLowerResult lb = tdp_lower_bound(sig.voxels, pass.supra, pass.k, table);
        row.tdp_lb = lb.tdp;
        total_lb += lb.numerator;
        total_size += row.size;

        if (want_heur) {
            TdpHeuristicResult h =
                tdp_heuristic(sig.voxels, pass.supra, pass.k, cfg.solve, Rng::mix(cfg.seed, cluster_stream));
            row.tdp_heur = h.tdp;
            row.certified = h.certified;
            total_heur += h.numerator;
            any_heur = true;
        }

        if (cfg.compute_upper && perms != nullptr) {
            std::size_t pi = static_cast<std::size_t>(&pass - passes.data());
            SolveResult s = solve_separator(sig.voxels, *reduced_k[pi], cfg.solve,
                                            Rng::mix(cfg.seed, 0x9000 + cluster_stream));
            row.tdp_upper = tdp_of(s.bound.value, row.size);
        }

        // atlas and queried overlaps for this cluster
        for (const NamedRegion& reg : named) {
            VoxelSet piece = set_intersection(sig.voxels, reg.voxels);
            if (piece.empty()) continue;
            RegionRow rr;
            rr.name = reg.name;
            rr.region_size = static_cast<std::int64_t>(reg.voxels.size());
            rr.overlap = static_cast<std::int64_t>(piece.size());
            for (const VoxelSet& comp : connected_components(piece).clusters)
                rr.lb_numerator += pruned_lower_bound(comp, pass.k, table).value;
            rr.tdp_lb = tdp_of(rr.lb_numerator, rr.region_size);
            if (want_heur) {
                SolveResult s = solve_separator(piece, pass.k, cfg.solve, Rng::mix(cfg.seed, 0x5000 + cluster_stream));
                rr.heur_numerator = s.bound.value;
                rr.tdp_heur = tdp_of(s.bound.value, rr.region_size);
            }
            row.regions.push_back(std::move(rr));
        }
        std::sort(row.regions.begin(), row.regions.end(),
                  [](const RegionRow& a, const RegionRow& b) { return a.overlap > b.overlap; });
        report.clusters.push_back(std::move(row));
    }

    report.totals.size = total_size;
    report.totals.tdp_lb = tdp_of(total_lb, total_size);
    if (any_heur) report.totals.tdp_heur = tdp_of(total_heur, total_size);

    // totals per region: aggregate the per-cluster numerators (additivity of
    // disconnected pieces)
    {
        struct Agg {
            std::int64_t overlap = 0;
            std::int64_t region_size = 0;
            std::int64_t lb_num = 0;
            std::int64_t heur_num = 0;
            bool have_heur = false;
        };
        std::vector<std::string> order;
        std::map<std::string, Agg> agg;
        for (const ClusterRow& row : report.clusters) {
            for (const RegionRow& rr : row.regions) {
                auto [it, fresh] = agg.try_emplace(rr.name);
                if (fresh) order.push_back(rr.name);
                it->second.overlap += rr.overlap;
                it->second.region_size = rr.region_size;
                it->second.lb_num += rr.lb_numerator;
                if (rr.heur_numerator) {
                    it->second.have_heur = true;
                    it->second.heur_num += *rr.heur_numerator;
                }
            }
        }
        for (const std::string& name : order) {
            const Agg& a = agg[name];
            RegionRow rr;
            rr.name = name;
            rr.region_size = a.region_size;
            rr.overlap = a.overlap;
            rr.lb_numerator = a.lb_num;
            rr.tdp_lb = tdp_of(a.lb_num, a.region_size);
            if (a.have_heur) {
                rr.heur_numerator = a.heur_num;
                rr.tdp_heur = tdp_of(a.heur_num, a.region_size);
            }
            report.totals.regions.push_back(std::move(rr));
        }
        std::sort(report.totals.regions.begin(), report.totals.regions.end(),
                  [](const RegionRow& a, const RegionRow& b) { return a.overlap > b.overlap; });
    }

    // queried regions: full-region TDP over every pass (split passes sum,
    // their supra sets are disjoint)
    for (const NamedRegion& reg : named) {
        if (!reg.queried) continue;
        RegionRow rr;
        rr.name = reg.name;
        rr.region_size = static_cast<std::int64_t>(reg.voxels.size());
        std::int64_t lb_num = 0, heur_num = 0, overlap = 0;
        bool have_heur = false;
        std::uint64_t stream = 0x7000;
        for (const PassData& pass : passes) {
            TdpLowerResult lb = tdp_lower_bound(reg.voxels, pass.supra, pass.k, table);
            lb_num += lb.numerator;
            overlap += static_cast<std::int64_t>(set_intersection(reg.voxels, pass.supra).size());
            if (want_heur) {
                TdpHeuristicResult h =
                    tdp_heuristic(reg.voxels, pass.supra, pass.k, cfg.solve, Rng::mix(cfg.seed, ++stream));
                heur_num += h.numerator;
                have_heur = true;
            }
        }
        rr.overlap = overlap;
        rr.lb_numerator = lb_num;
        rr.tdp_lb = tdp_of(lb_num, rr.region_size);
        if (have_heur) {
            rr.heur_numerator = heur_num;
            rr.tdp_heur = tdp_of(heur_num, rr.region_size);
        }
        report.queried.push_back(std::move(rr));
    }

    for (std::size_t i = 0; i < passes.size(); ++i) {
        PassInfo info;
        info.direction = passes[i].direction;
        info.z_used = passes[i].z;
        info.extent_used = passes[i].k;
        info.reduced_extent = reduced_k[i];
        info.exhausted_perms = passes[i].exhausted;
        report.passes.push_back(info);
    }
    return report;
}

}  // namespace voxtdp
