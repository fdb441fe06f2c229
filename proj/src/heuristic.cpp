#include "voxtdp/heuristic.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace voxtdp {

namespace {

// Greedy clustering state over the base voxels of one geometry. Voxels carry
// a cluster id or -1 (separator / free).
struct Clustering {
    const CoverGeometry* geo;
    std::vector<std::int32_t> base;          // cover indices of base voxels
    std::vector<std::int32_t> base_rank;     // cover idx -> position in `base`, -1 for cover-only
    std::vector<std::int32_t> assign;        // per base position: cluster id or -1
    std::vector<std::int64_t> cluster_size;
    std::int64_t covered = 0;

    explicit Clustering(const CoverGeometry& g) : geo(&g) {
        base_rank.assign(g.cover_size(), -1);
        for (std::int32_t i = 0; i < g.cover_size(); ++i) {
            if (g.in_base(i)) {
                base_rank[i] = static_cast<std::int32_t>(base.size());
                base.push_back(i);
            }
        }
        assign.assign(base.size(), -1);
    }

    std::int64_t n() const { return static_cast<std::int64_t>(base.size()); }
    std::int64_t separator_size() const { return n() - covered; }

    void reset() {
        std::fill(assign.begin(), assign.end(), -1);
        cluster_size.clear();
        covered = 0;
    }

    bool free_voxel(std::int32_t pos) const { return assign[pos] < 0; }

    // a free voxel may seed or join cluster c only if its assigned neighbors
    // all belong to c (use c = -1 for "no assigned neighbors")
    bool joinable(std::int32_t pos, std::int32_t c) const {
        for (std::int32_t u : geo->neighbors(base[pos])) {
            std::int32_t r = base_rank[u];
            if (r < 0) continue;
            std::int32_t a = assign[r];
            if (a >= 0 && a != c) return false;
        }
        return true;
    }

    bool seedable(std::int32_t pos) const { return free_voxel(pos) && joinable(pos, -1); }
};

// One grown candidate: voxel positions plus how much free frontier it left.
struct Candidate {
    std::vector<std::int32_t> members;
    std::int64_t frontier_left = 0;
};

class Grower {
public:
    Grower(Clustering& cl, Rng& rng) : cl_(&cl), rng_(&rng), mark_(cl.n(), 0), in_c_(cl.n(), 0), nbr_in_c_(cl.n(), 0) {}

    // Grow one candidate from a random seedable voxel toward `target` size,
    // preferring compact extensions (most neighbors already inside, lowest
    // index on ties among a sampled frontier subset).
    bool grow(std::int32_t target, const std::vector<std::int32_t>& seed_pool, Candidate& out,
              std::int64_t& insertions) {
        std::int32_t seed = -1;
        for (int tries = 0; tries < 8 && seed < 0; ++tries) {
            if (seed_pool.empty()) break;
            std::int32_t cand = seed_pool[rng_->below(seed_pool.size())];
            if (cl_->seedable(cand)) seed = cand;
        }
        if (seed < 0) {
            for (std::int32_t cand : seed_pool)
                if (cl_->seedable(cand)) {
                    seed = cand;
                    break;
                }
        }
        if (seed < 0) return false;

        ++epoch_;
        out.members.clear();
        frontier_.clear();
        out.members.push_back(seed);
        in_c_[seed] = epoch_;
        ++insertions;
        push_frontier(seed);
        while (static_cast<std::int32_t>(out.members.size()) < target && !frontier_.empty()) {
            std::int32_t chosen = pick();
            if (chosen < 0) break;
            out.members.push_back(chosen);
            in_c_[chosen] = epoch_;
            ++insertions;
            push_frontier(chosen);
        }
        out.frontier_left = 0;
        for (std::int32_t f : frontier_)
            if (valid_frontier(f)) ++out.frontier_left;
        return true;
    }

private:
    bool valid_frontier(std::int32_t pos) const {
        return in_c_[pos] != epoch_ && cl_->free_voxel(pos) && cl_->joinable(pos, current_cluster_);
    }

    void push_frontier(std::int32_t added) {
        for (std::int32_t u : cl_->geo->neighbors(cl_->base[added])) {
            std::int32_t r = cl_->base_rank[u];
            if (r < 0 || in_c_[r] == epoch_) continue;
            if (!cl_->free_voxel(r)) continue;
            if (nbr_mark_of(r) != epoch_) {
                set_nbr(r, 1);
                frontier_.push_back(r);
            } else {
                bump_nbr(r);
            }
        }
    }

    std::int32_t pick() {
        // sample a few frontier entries, take the most connected valid one
        const int attempts = 12;
        std::int32_t best = -1;
        std::int32_t best_cnt = -1;
        for (int a = 0; a < attempts && !frontier_.empty(); ++a) {
            std::int32_t idx = static_cast<std::int32_t>(rng_->below(frontier_.size()));
            std::int32_t pos = frontier_[idx];
            if (in_c_[pos] == epoch_ || !cl_->free_voxel(pos) || !cl_->joinable(pos, current_cluster_)) continue;
            std::int32_t cnt = nbr_in_c_[pos];
            if (cnt > best_cnt || (cnt == best_cnt && pos < best)) {
                best = pos;
                best_cnt = cnt;
            }
        }
        if (best >= 0) return best;
        // fall back to a full scan
        for (std::int32_t pos : frontier_) {
            if (in_c_[pos] == epoch_ || !cl_->free_voxel(pos) || !cl_->joinable(pos, current_cluster_)) continue;
            std::int32_t cnt = nbr_in_c_[pos];
            if (cnt > best_cnt || (cnt == best_cnt && pos < best)) {
                best = pos;
                best_cnt = cnt;
            }
        }
        return best;
    }

    std::int32_t nbr_mark_of(std::int32_t pos) const { return mark_[pos]; }
    void set_nbr(std::int32_t pos, std::int32_t v) {
        mark_[pos] = epoch_;
        nbr_in_c_[pos] = v;
    }
    void bump_nbr(std::int32_t pos) { ++nbr_in_c_[pos]; }

    Clustering* cl_;
    Rng* rng_;
    std::vector<std::int32_t> frontier_;
    std::vector<std::int32_t> mark_;      // epoch stamp for nbr_in_c_
    std::vector<std::int32_t> in_c_;      // epoch stamp for membership
    std::vector<std::int32_t> nbr_in_c_;  // neighbors already inside the candidate
    std::int32_t epoch_ = 0;
    std::int32_t current_cluster_ = -1;   // growth never crosses other clusters
};

// Fill the clustering with candidate clusters until no seed remains or the
// insertion budget is exhausted. Returns false when stopped by budget.
bool fill(Clustering& cl, std::int64_t k, const HeuristicParams::Phase1& p, Rng& rng, std::int64_t& budget) {
    Grower grower(cl, rng);
    std::vector<std::int32_t> seed_pool;
    for (std::int32_t i = 0; i < cl.n(); ++i)
        if (cl.seedable(i)) seed_pool.push_back(i);

    Candidate cand, best;
    while (!seed_pool.empty()) {
        // prune stale pool entries lazily
        std::erase_if(seed_pool, [&](std::int32_t pos) { return !cl.seedable(pos); });
        if (seed_pool.empty()) break;
        bool have = false;
        for (int s = 0; s < p.candidates; ++s) {
            for (std::int64_t target = k; target >= std::max<std::int64_t>(1, k - p.missing);
                 target -= std::max<std::int64_t>(1, p.step)) {
                std::int64_t used = 0;
                Candidate c;
                if (!grower.grow(static_cast<std::int32_t>(target), seed_pool, c, used)) continue;
                budget -= used;
                // larger coverage wins; on ties prefer the candidate leaving
                // the smaller frontier (less future blocking)
                if (!have || c.members.size() > best.members.size() ||
                    (c.members.size() == best.members.size() && c.frontier_left < best.frontier_left)) {
                    best = std::move(c);
                    have = true;
                }
                if (budget <= 0) break;
            }
            if (budget <= 0) break;
        }
        if (!have) break;
        std::int32_t id = static_cast<std::int32_t>(cl.cluster_size.size());
        cl.cluster_size.push_back(static_cast<std::int64_t>(best.members.size()));
        for (std::int32_t posn : best.members) cl.assign[posn] = id;
        cl.covered += static_cast<std::int64_t>(best.members.size());
        if (budget <= 0) {
            // finish deterministically: assign remaining singleton-seedable
            // voxels as size-1 clusters so the result is still a valid state
            for (std::int32_t i = 0; i < cl.n(); ++i) {
                if (cl.seedable(i)) {
                    cl.assign[i] = static_cast<std::int32_t>(cl.cluster_size.size());
                    cl.cluster_size.push_back(1);
                    ++cl.covered;
                }
            }
            return false;
        }
    }
    return true;
}

VoxelSet clustering_separator(const Clustering& cl) {
    std::vector<std::int32_t> sep;
    for (std::int32_t i = 0; i < cl.n(); ++i)
        if (cl.assign[i] < 0) sep.push_back(cl.base[i]);
    return cl.geo->to_voxel_set(sep);
}

void phase2(Clustering& cl, std::int64_t k, const HeuristicParams& params, Rng& rng, std::int64_t& budget) {
    const auto& p2 = params.phase2;
    std::int64_t fails = 0;
    for (std::int64_t run = 0; run < p2.big_runs && budget > 0; ++run) {
        if (cl.cluster_size.empty()) break;
        // cluster adjacency through shared separator voxels
        std::vector<std::vector<std::int32_t>> adjacent(cl.cluster_size.size());
        for (std::int32_t i = 0; i < cl.n(); ++i) {
            if (cl.assign[i] >= 0) continue;
            std::int32_t seen[64];
            int n_seen = 0;
            for (std::int32_t u : cl.geo->neighbors(cl.base[i])) {
                std::int32_t r = cl.base_rank[u];
                if (r < 0 || cl.assign[r] < 0) continue;
                std::int32_t c = cl.assign[r];
                bool dup = false;
                for (int s = 0; s < n_seen && !dup; ++s) dup = seen[s] == c;
                if (!dup && n_seen < 64) seen[n_seen++] = c;
            }
            for (int a = 0; a < n_seen; ++a)
                for (int b = a + 1; b < n_seen; ++b) {
                    adjacent[seen[a]].push_back(seen[b]);
                    adjacent[seen[b]].push_back(seen[a]);
                }
        }
        std::int32_t c0 = -1;
        for (int tries = 0; tries < 16 && c0 < 0; ++tries) {
            std::int32_t cand = static_cast<std::int32_t>(rng.below(cl.cluster_size.size()));
            if (cl.cluster_size[cand] > 0) c0 = cand;
        }
        if (c0 < 0) break;
        std::vector<std::int32_t> region{c0};
        std::vector<std::int32_t>& nb = adjacent[c0];
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        while (static_cast<int>(region.size()) < p2.clusters && !nb.empty()) {
            std::size_t pickat = rng.below(nb.size());
            region.push_back(nb[pickat]);
            nb.erase(nb.begin() + static_cast<std::ptrdiff_t>(pickat));
        }

        std::vector<std::int32_t> before = cl.assign;
        std::vector<std::int64_t> sizes_before = cl.cluster_size;
        std::int64_t covered_before = cl.covered;

        for (std::int32_t i = 0; i < cl.n(); ++i) {
            std::int32_t a = cl.assign[i];
            if (a >= 0 && std::find(region.begin(), region.end(), a) != region.end()) {
                cl.assign[i] = -1;
                --cl.covered;
                --cl.cluster_size[a];
            }
        }
        HeuristicParams::Phase1 refill = params.phase1;
        refill.runs = 1;
        fill(cl, k, refill, rng, budget);

        if (cl.covered > covered_before) {
            fails = 0;
        } else {
            cl.assign = std::move(before);
            cl.cluster_size = std::move(sizes_before);
            cl.covered = covered_before;
            ++fails;
            if (fails >= p2.stall) break;
        }
    }
}

}  // namespace

SeparatorBound two_phase_separator(const VoxelSet& v, std::int64_t k, const HeuristicParams& params,
                                   std::uint64_t seed) {
    SeparatorBound out;
    out.kind = BoundKind::heuristic_upper;
    if (k < 0) throw std::invalid_argument("two_phase_separator: negative k");
    if (v.empty() || static_cast<std::int64_t>(v.size()) <= k || largest_cluster_size(v) <= k) {
        out.value = 0;
        out.witness = VoxelSet(v.dim());
        return out;
    }
    if (k == 0) {
        out.value = static_cast<std::int64_t>(v.size());
        out.witness = v;
        return out;
    }

    CoverGeometry geo(v);
    Clustering cl(geo);
    Rng rng(seed);

    std::int64_t budget1 = params.phase1.insertion_budget;
    std::vector<std::int32_t> best_assign;
    std::int64_t best_sep = std::numeric_limits<std::int64_t>::max();
    for (std::int64_t run = 0; run < params.phase1.runs && (run == 0 || budget1 > 0); ++run) {
        cl.reset();
        fill(cl, k, params.phase1, rng, budget1);
        if (cl.separator_size() < best_sep) {
            best_sep = cl.separator_size();
            best_assign = cl.assign;
        }
    }
    cl.assign = std::move(best_assign);
    cl.cluster_size.clear();
    cl.covered = 0;
    {
        std::int32_t max_id = -1;
        for (std::int32_t a : cl.assign) max_id = std::max(max_id, a);
        cl.cluster_size.assign(max_id + 1, 0);
        for (std::int32_t a : cl.assign)
            if (a >= 0) {
                ++cl.cluster_size[a];
                ++cl.covered;
            }
    }

    std::int64_t budget2 = params.phase2.insertion_budget;
    phase2(cl, k, params, rng, budget2);

    out.witness = clustering_separator(cl);
    out.value = static_cast<std::int64_t>(out.witness->size());
    if (!verify_separator(v, *out.witness, k)) throw std::logic_error("two_phase_separator: invalid witness");
    return out;
}

HyperrectInstance hyperrect_instance(std::int64_t n, const std::vector<std::int64_t>& c) {
    if (n < 1) throw std::invalid_argument("hyperrect_instance: n < 1");
    const int d = static_cast<int>(c.size());
    if (d < 1 || d > Coord::max_dim) throw std::invalid_argument("hyperrect_instance: bad dimension");
    for (auto ci : c)
        if (ci < 1) throw std::invalid_argument("hyperrect_instance: c entries must be positive");
    HyperrectInstance out;
    out.k = 1;
    for (int i = 0; i < d; ++i) out.k *= n;
    std::int64_t cells = 1, prod_c = 1;
    std::vector<std::int64_t> side(d);
    for (int i = 0; i < d; ++i) {
        side[i] = (n + 1) * c[i] - 1;
        cells *= side[i];
        prod_c *= c[i];
    }
    std::vector<Coord> pts;
    pts.reserve(static_cast<std::size_t>(cells));
    std::vector<std::int32_t> cur(d, 1);
    for (;;) {
        pts.push_back(Coord(std::span<const std::int32_t>(cur)));
        int i = 0;
        for (; i < d; ++i) {
            if (cur[i] < side[i]) {
                ++cur[i];
                break;
            }
            cur[i] = 1;
        }
        if (i == d) break;
    }
    out.box = VoxelSet::of(d, std::move(pts));
    out.optimal = cells - out.k * prod_c;
    return out;
}

VoxelSet hyperrect_grid_separator(std::int64_t n, const std::vector<std::int64_t>& c) {
    HyperrectInstance inst = hyperrect_instance(n, c);
    std::vector<Coord> sep;
    for (const Coord& v : inst.box.voxels()) {
        for (int i = 0; i < inst.box.dim(); ++i) {
            if (v[i] % (n + 1) == 0) {
                sep.push_back(v);
                break;
            }
        }
    }
    return VoxelSet::of(inst.box.dim(), std::move(sep));
}

SolveResult solve_separator(const VoxelSet& v, std::int64_t k, const SolveOptions& opt, std::uint64_t seed) {
    SolveResult out;
    out.certified = true;
    out.bound.kind = BoundKind::heuristic_upper;
    out.bound.value = 0;
    out.bound.witness = VoxelSet(v.dim());
    if (v.empty()) {
        out.bound.kind = BoundKind::exact;
        return out;
    }
    RatioTable table(v.dim(), std::max<std::int64_t>(k, 1));
    ClusterDecomposition comps = connected_components(v);
    VoxelSet witness(v.dim());
    std::int64_t total = 0;
    std::uint64_t stream = 0;
    for (const VoxelSet& comp : comps.clusters) {
        ++stream;
        if (static_cast<std::int64_t>(comp.size()) <= k) continue;
        if (comp.size() <= opt.exact_cap) {
            SeparatorBound b = exact_separator(comp, k, {opt.exact_cap});
            total += b.value;
            witness = set_union(witness, *b.witness);
            continue;
        }
        const std::uint64_t comp_seed = Rng::mix(seed, stream);
        const std::int64_t lb = pruned_lower_bound(comp, k, table).value;
        SeparatorBound b = two_phase_separator(comp, k, opt.params, Rng::mix(comp_seed, 1));
        if (opt.run_anneal && b.value > lb)
            b = anneal_separator(comp, k, b, opt.params.sa, Rng::mix(comp_seed, 2), lb);
        if (b.value > lb) out.certified = false;  // lb met means provably optimal
        total += b.value;
        witness = set_union(witness, *b.witness);
    }
    out.bound.value = total;
    out.bound.witness = std::move(witness);
    out.bound.kind = out.certified ? BoundKind::exact : BoundKind::heuristic_upper;
    return out;
}

}  // namespace voxtdp
