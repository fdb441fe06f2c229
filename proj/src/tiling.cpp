#include "voxtdp/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace voxtdp {

namespace {

inline std::int64_t pospart(std::int64_t x) { return x > 0 ? x : 0; }

}  // namespace

CoverGeometry::CoverGeometry(const VoxelSet& v) : dim_(v.dim()), base_(v) {
    n_off_ = 1 << dim_;
    base_size_ = static_cast<std::int64_t>(v.size());
    VoxelSet cov = cover(v);
    coords_ = cov.voxels();
    const std::int32_t n = cover_size();
    in_base_.assign(n, 0);
    {
        // base_ and coords_ are both sorted; mark membership by merge
        std::size_t bi = 0;
        const auto& bv = base_.voxels();
        for (std::int32_t i = 0; i < n; ++i) {
            if (bi < bv.size() && bv[bi] == coords_[i]) {
                in_base_[i] = 1;
                ++bi;
            }
        }
    }
    pos_.assign(static_cast<std::size_t>(n) * n_off_, -1);
    neg_.assign(static_cast<std::size_t>(n) * n_off_, -1);
    for (std::int32_t i = 0; i < n; ++i) {
        for (std::int32_t m = 0; m < n_off_; ++m) {
            Coord up = coords_[i], down = coords_[i];
            for (int b = 0; b < dim_; ++b) {
                if (m & (1 << b)) {
                    ++up[b];
                    --down[b];
                }
            }
            pos_[static_cast<std::size_t>(i) * n_off_ + m] = index_of(up);
            neg_[static_cast<std::size_t>(i) * n_off_ + m] = index_of(down);
        }
    }
    nbr_begin_.assign(n + 1, 0);
    std::vector<std::int32_t> offsets_flat;
    {
        std::vector<std::int32_t> off(dim_, -1);
        for (;;) {
            bool zero = std::all_of(off.begin(), off.end(), [](std::int32_t x) { return x == 0; });
            if (!zero)
                for (int b = 0; b < dim_; ++b) offsets_flat.push_back(off[b]);
            int i = 0;
            for (; i < dim_; ++i) {
                if (off[i] < 1) {
                    ++off[i];
                    break;
                }
                off[i] = -1;
            }
            if (i == dim_) break;
        }
    }
    const std::size_t n_nbr_off = offsets_flat.size() / dim_;
    std::vector<std::int32_t> tmp;
    tmp.reserve(n_nbr_off);
    for (std::int32_t i = 0; i < n; ++i) {
        tmp.clear();
        for (std::size_t o = 0; o < n_nbr_off; ++o) {
            Coord w = coords_[i];
            for (int b = 0; b < dim_; ++b) w[b] += offsets_flat[o * dim_ + b];
            std::int32_t j = index_of(w);
            if (j >= 0) tmp.push_back(j);
        }
        nbr_begin_[i + 1] = nbr_begin_[i] + static_cast<std::int32_t>(tmp.size());
        nbr_.insert(nbr_.end(), tmp.begin(), tmp.end());
    }
}

std::int32_t CoverGeometry::index_of(const Coord& c) const {
    auto it = std::lower_bound(coords_.begin(), coords_.end(), c);
    if (it == coords_.end() || !(*it == c)) return -1;
    return static_cast<std::int32_t>(it - coords_.begin());
}

VoxelSet CoverGeometry::to_voxel_set(const std::vector<std::int32_t>& cover_indices) const {
    std::vector<Coord> pts;
    pts.reserve(cover_indices.size());
    for (auto ci : cover_indices) pts.push_back(coords_[ci]);
    return VoxelSet::of(dim_, std::move(pts));
}

TilingState::TilingState(const CoverGeometry& geo, std::int64_t k, std::vector<std::int32_t> tile_of)
    : geo_(&geo), k_(k), tile_of_(std::move(tile_of)) {
    if (static_cast<std::int32_t>(tile_of_.size()) != geo.cover_size())
        throw std::invalid_argument("TilingState: assignment size mismatch");
    rebuild_counts();
}

TilingState TilingState::singletons(const CoverGeometry& geo, std::int64_t k) {
    std::vector<std::int32_t> assign(geo.cover_size());
    std::iota(assign.begin(), assign.end(), 0);
    return TilingState(geo, k, std::move(assign));
}

TilingState TilingState::from_separator(const CoverGeometry& geo, std::int64_t k, const VoxelSet& r) {
    const std::int32_t n = geo.cover_size();
    std::vector<std::uint8_t> removed(n, 0);
    for (const Coord& c : r.voxels()) {
        std::int32_t ci = geo.index_of(c);
        if (ci < 0 || !geo.in_base(ci)) throw std::invalid_argument("from_separator: separator not a subset of V");
        removed[ci] = 1;
    }
    std::vector<std::int32_t> comp(n, -1);
    std::int32_t next = 0;
    std::vector<std::int32_t> stack;
    // components of V \ R
    for (std::int32_t i = 0; i < n; ++i) {
        if (!geo.in_base(i) || removed[i] || comp[i] >= 0) continue;
        comp[i] = next;
        stack.assign(1, i);
        while (!stack.empty()) {
            std::int32_t x = stack.back();
            stack.pop_back();
            for (std::int32_t u : geo.neighbors(x)) {
                if (geo.in_base(u) && !removed[u] && comp[u] < 0) {
                    comp[u] = next;
                    stack.push_back(u);
                }
            }
        }
        ++next;
    }
    std::vector<std::int32_t> assign(n, -1);
    // tiles are covers of the components
    for (std::int32_t i = 0; i < n; ++i) {
        if (comp[i] < 0) continue;
        for (std::int32_t m = 0; m < geo.offsets(); ++m) {
            std::int32_t j = geo.positive(i, m);
            if (j >= 0) assign[j] = comp[i];
        }
    }
    // leftover cover voxels become tiles per connected component
    for (std::int32_t i = 0; i < n; ++i) {
        if (assign[i] >= 0) continue;
        std::int32_t id = next++;
        assign[i] = id;
        stack.assign(1, i);
        while (!stack.empty()) {
            std::int32_t x = stack.back();
            stack.pop_back();
            for (std::int32_t u : geo.neighbors(x)) {
                if (assign[u] < 0) {
                    assign[u] = id;
                    stack.push_back(u);
                }
            }
        }
    }
    return TilingState(geo, k, std::move(assign));
}

void TilingState::rebuild_counts() {
    const CoverGeometry& g = *geo_;
    const std::int32_t n = g.cover_size();
    std::int32_t max_tile = -1;
    for (std::int32_t i = 0; i < n; ++i) {
        if (tile_of_[i] < 0) throw std::invalid_argument("TilingState: unassigned cover voxel");
        max_tile = std::max(max_tile, tile_of_[i]);
    }
    interior_count_.assign(max_tile + 1, 0);
    shave_count_.assign(max_tile + 1, 0);
    population_.assign(max_tile + 1, 0);
    is_interior_.assign(n, 0);
    for (std::int32_t i = 0; i < n; ++i) {
        ++population_[tile_of_[i]];
        if (!g.in_base(i)) continue;
        bool inside = true;
        for (std::int32_t m = 1; m < g.offsets() && inside; ++m)
            inside = tile_of_[g.positive(i, m)] == tile_of_[i];
        is_interior_[i] = inside;
        if (inside)
            ++interior_count_[tile_of_[i]];
        else
            ++shave_count_[tile_of_[i]];
    }
    free_ids_.clear();
    for (std::int32_t t = 0; t <= max_tile; ++t)
        if (population_[t] == 0) free_ids_.push_back(t);
    t_ = 0;
    for (std::int32_t t = 0; t <= max_tile; ++t) t_ += shave_count_[t] + pospart(interior_count_[t] - k_);
}

std::int64_t TilingState::recompute_target() const {
    const CoverGeometry& g = *geo_;
    std::int64_t total = 0;
    std::vector<std::int64_t> ic(interior_count_.size(), 0), sc(interior_count_.size(), 0);
    for (std::int32_t i = 0; i < g.cover_size(); ++i) {
        if (!g.in_base(i)) continue;
        bool inside = true;
        for (std::int32_t m = 1; m < g.offsets() && inside; ++m)
            inside = tile_of_[g.positive(i, m)] == tile_of_[i];
        if (inside)
            ++ic[tile_of_[i]];
        else
            ++sc[tile_of_[i]];
    }
    for (std::size_t t = 0; t < ic.size(); ++t) total += sc[t] + pospart(ic[t] - k_);
    return total;
}

namespace {

// at most 2^d base voxels change interior status on a single reassignment
struct Affected {
    std::int32_t voxel;
    std::int32_t tile_before;
    std::int32_t tile_after;
    bool int_before;
    bool int_after;
};

}  // namespace

std::int64_t TilingState::peek(const Move& m) const {
    const CoverGeometry& g = *geo_;
    const std::int32_t v = m.voxel;
    const std::int32_t from = tile_of_[v];
    const std::int32_t to = m.to == new_tile ? -3 : m.to;  // virtual id for a fresh tile
    if (to == from) return t_;

    auto tile_after_of = [&](std::int32_t ci) { return ci == v ? to : tile_of_[ci]; };

    Affected touched[1 << Coord::max_dim];
    int n_touched = 0;
    for (std::int32_t mm = 0; mm < g.offsets(); ++mm) {
        std::int32_t w = g.negative(v, mm);
        if (w < 0 || !g.in_base(w)) continue;
        bool dup = false;
        for (int i = 0; i < n_touched && !dup; ++i) dup = touched[i].voxel == w;
        if (dup) continue;
        Affected a;
        a.voxel = w;
        a.tile_before = tile_of_[w];
        a.tile_after = tile_after_of(w);
        a.int_before = is_interior_[w];
        bool inside = true;
        for (std::int32_t p = 1; p < g.offsets() && inside; ++p)
            inside = tile_after_of(g.positive(w, p)) == a.tile_after;
        a.int_after = inside;
        touched[n_touched++] = a;
    }

    // aggregate per tile: shave/interior deltas
    std::int32_t tiles[2 * (1 << Coord::max_dim)];
    std::int64_t d_int[2 * (1 << Coord::max_dim)];
    std::int64_t d_shave[2 * (1 << Coord::max_dim)];
    int n_tiles = 0;
    auto slot = [&](std::int32_t t) {
        for (int i = 0; i < n_tiles; ++i)
            if (tiles[i] == t) return i;
        tiles[n_tiles] = t;
        d_int[n_tiles] = 0;
        d_shave[n_tiles] = 0;
        return n_tiles++;
    };
    for (int i = 0; i < n_touched; ++i) {
        const Affected& a = touched[i];
        int sb = slot(a.tile_before);
        if (a.int_before)
            --d_int[sb];
        else
            --d_shave[sb];
        int sa = slot(a.tile_after);
        if (a.int_after)
            ++d_int[sa];
        else
            ++d_shave[sa];
    }
    std::int64_t t_new = t_;
    for (int i = 0; i < n_tiles; ++i) {
        std::int64_t ic_old = tiles[i] >= 0 && tiles[i] < static_cast<std::int32_t>(interior_count_.size())
                                  ? interior_count_[tiles[i]]
                                  : 0;
        t_new += d_shave[i] + pospart(ic_old + d_int[i] - k_) - pospart(ic_old - k_);
    }
    return t_new;
}

void TilingState::apply(const Move& m) {
    const CoverGeometry& g = *geo_;
    const std::int32_t v = m.voxel;
    const std::int32_t from = tile_of_[v];
    std::int32_t to = m.to;
    if (to == new_tile) {
        if (!free_ids_.empty()) {
            to = free_ids_.back();
            free_ids_.pop_back();
        } else {
            to = static_cast<std::int32_t>(population_.size());
            population_.push_back(0);
            interior_count_.push_back(0);
            shave_count_.push_back(0);
        }
    }
    if (to == from) return;

    t_ = peek({v, to});

    // commit: statuses of v and its negative base neighbors
    for (std::int32_t mm = 0; mm < g.offsets(); ++mm) {
        std::int32_t w = g.negative(v, mm);
        if (w < 0 || !g.in_base(w)) continue;
        if (is_interior_[w])
            --interior_count_[tile_of_[w]];
        else
            --shave_count_[tile_of_[w]];
    }
    --population_[from];
    tile_of_[v] = to;
    ++population_[to];
    for (std::int32_t mm = 0; mm < g.offsets(); ++mm) {
        std::int32_t w = g.negative(v, mm);
        if (w < 0 || !g.in_base(w)) continue;
        bool inside = true;
        for (std::int32_t p = 1; p < g.offsets() && inside; ++p)
            inside = tile_of_[g.positive(w, p)] == tile_of_[w];
        is_interior_[w] = inside;
        if (inside)
            ++interior_count_[tile_of_[w]];
        else
            ++shave_count_[tile_of_[w]];
    }
    if (population_[from] == 0) free_ids_.push_back(from);
}

VoxelSet TilingState::to_separator() const {
    const CoverGeometry& g = *geo_;
    std::vector<std::int32_t> chosen;
    std::vector<std::int64_t> excess(interior_count_.size());
    for (std::size_t t = 0; t < interior_count_.size(); ++t) excess[t] = pospart(interior_count_[t] - k_);
    for (std::int32_t i = 0; i < g.cover_size(); ++i) {
        if (!g.in_base(i)) continue;
        if (!is_interior_[i]) {
            chosen.push_back(i);
        } else if (excess[tile_of_[i]] > 0) {
            // remove interior voxels beyond k, lowest index first
            --excess[tile_of_[i]];
            chosen.push_back(i);
        }
    }
    return g.to_voxel_set(chosen);
}

std::int64_t tiling_target(const TilingState& t) { return t.target(); }

SeparatorBound tiling_to_separator(const TilingState& t) {
    SeparatorBound out;
    out.kind = BoundKind::heuristic_upper;
    out.witness = t.to_separator();
    out.value = static_cast<std::int64_t>(out.witness->size());
    return out;
}

TilingState separator_to_tiling(const CoverGeometry& geo, const VoxelSet& v, const VoxelSet& r, std::int64_t k) {
    if (!is_subset(r, v)) throw std::invalid_argument("separator_to_tiling: R not a subset of V");
    if (largest_cluster_size(set_difference(v, r)) > k)
        throw std::invalid_argument("separator_to_tiling: R is not a k-separator");
    return TilingState::from_separator(geo, k, r);
}

SeparatorBound anneal_separator(const VoxelSet& v, std::int64_t k, const SeparatorBound& start,
                                const AnnealParams& params, std::uint64_t seed, std::int64_t certified_lower) {
    if (!start.witness) throw std::invalid_argument("anneal_separator: start bound has no witness");
    if (v.empty() || start.value == 0 || start.value <= certified_lower) return start;

    CoverGeometry geo(v);
    TilingState state = TilingState::from_separator(geo, k, *start.witness);
    Rng rng(seed);

    std::int64_t t = state.target();
    std::int64_t best = t;
    std::vector<std::int32_t> best_assign = state.assignment();

    const std::int32_t n = geo.cover_size();
    std::int64_t stall = 0;
    for (std::int64_t it = 1; it <= params.max_proposals && stall < params.stall_iters; ++it) {
        if (best <= certified_lower) break;
        std::int32_t vi = static_cast<std::int32_t>(rng.below(n));
        auto nbrs = geo.neighbors(vi);
        if (nbrs.empty()) {
            ++stall;
            continue;
        }
        std::int32_t wi = nbrs[rng.below(nbrs.size())];
        TilingState::Move move;
        move.voxel = vi;
        if (state.tile_of(vi) == state.tile_of(wi) && state.interior_in_base(state.tile_of(vi)) > k)
            move.to = TilingState::new_tile;
        else
            move.to = state.tile_of(wi);
        const std::int64_t t2 = state.peek(move.to == TilingState::new_tile ? TilingState::Move{vi, TilingState::new_tile} : move);
        bool accept = t2 <= t;
        if (!accept && params.tuning > 0) {
            const double p = std::exp(-static_cast<double>(t2 - t) / params.tuning * std::log(static_cast<double>(it)));
            accept = rng.uniform01() < p;
        }
        if (accept) {
            state.apply(move);
            t = t2;
            if (t < best) {
                best = t;
                best_assign = state.assignment();
                stall = 0;
            } else {
                ++stall;
            }
        } else {
            ++stall;
        }
        // drift audit on the incremental target
        if ((it & 0xffff) == 0 && state.recompute_target() != state.target())
            throw std::logic_error("anneal_separator: incremental target drifted");
    }

    if (best >= start.value) return start;
    TilingState final_state(geo, k, std::move(best_assign));
    SeparatorBound out = tiling_to_separator(final_state);
    if (out.value != best) throw std::logic_error("anneal_separator: witness size mismatch");
    if (!verify_separator(v, *out.witness, k)) throw std::logic_error("anneal_separator: invalid witness");
    return out;
}

}  // namespace voxtdp
