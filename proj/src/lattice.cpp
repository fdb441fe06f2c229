#include "voxtdp/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>

namespace voxtdp {

namespace {

void check_same_dim(const VoxelSet& a, const VoxelSet& b) {
    if (!a.empty() && !b.empty() && a.dim() != b.dim())
        throw std::invalid_argument("voxel sets have different dimensions");
}

// cells a dense grid would need, with overflow saturation
std::uint64_t grid_cells(const Coord& lo, const Coord& hi, int d, int pad) {
    std::uint64_t cells = 1;
    for (int i = 0; i < d; ++i) {
        std::uint64_t ext = static_cast<std::uint64_t>(static_cast<std::int64_t>(hi[i]) - lo[i] + 1 + pad);
        if (ext == 0 || cells > std::numeric_limits<std::uint64_t>::max() / ext) return std::numeric_limits<std::uint64_t>::max();
        cells *= ext;
    }
    return cells;
}

constexpr std::uint64_t kDenseCellCap = 1ull << 24;

bool use_dense(const VoxelSet& v, LatticeImpl impl, int pad) {
    if (impl == LatticeImpl::Sparse) return false;
    if (v.empty()) return false;
    std::uint64_t cells = grid_cells(v.bbox_min(), v.bbox_max(), v.dim(), pad);
    if (impl == LatticeImpl::Dense) {
        if (cells > kDenseCellCap) throw std::invalid_argument("dense lattice path: bounding box too large");
        return true;
    }
    return cells <= kDenseCellCap && cells <= 512 * (v.size() + 64);
}

// Dense scratch grid over the bounding box of a set, with optional padding on
// the high side (room for cover results).
struct Grid {
    int d;
    Coord lo;
    std::array<std::int64_t, Coord::max_dim> ext{};
    std::array<std::int64_t, Coord::max_dim> stride{};
    std::vector<std::uint8_t> cell;

    Grid(const VoxelSet& v, int pad_hi) : d(v.dim()), lo(v.bbox_min()) {
        std::int64_t n = 1;
        for (int i = 0; i < d; ++i) {
            ext[i] = static_cast<std::int64_t>(v.bbox_max()[i]) - lo[i] + 1 + pad_hi;
            stride[i] = n;
            n *= ext[i];
        }
        cell.assign(static_cast<std::size_t>(n), 0);
        for (const Coord& c : v.voxels()) cell[index(c)] = 1;
    }
    std::int64_t index(const Coord& c) const {
        std::int64_t idx = 0;
        for (int i = 0; i < d; ++i) idx += (static_cast<std::int64_t>(c[i]) - lo[i]) * stride[i];
        return idx;
    }
    bool in_bounds(const Coord& c) const {
        for (int i = 0; i < d; ++i) {
            std::int64_t o = static_cast<std::int64_t>(c[i]) - lo[i];
            if (o < 0 || o >= ext[i]) return false;
        }
        return true;
    }
    bool test(const Coord& c) const { return in_bounds(c) && cell[index(c)]; }
};

void check_cover_overflow(const Coord& c) {
    for (int i = 0; i < c.dim(); ++i)
        if (c[i] == std::numeric_limits<std::int32_t>::max())
            throw std::overflow_error("cover: coordinate overflow at int32 maximum");
}

struct UnionFind {
    std::vector<std::int32_t> parent;
    std::vector<std::int32_t> sz;
    explicit UnionFind(std::size_t n) : parent(n), sz(n, 1) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    std::int32_t find(std::int32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (sz[a] < sz[b]) std::swap(a, b);
        parent[b] = a;
        sz[a] += sz[b];
    }
};

// Offsets in {-1,0,1}^d that are lexicographically positive (first nonzero
// component +1); probing these once per voxel covers every neighbor pair.
std::vector<Coord> half_neighborhood(int d) {
    std::vector<Coord> out;
    std::vector<std::int32_t> off(d, -1);
    for (;;) {
        bool positive = false;
        for (int i = 0; i < d; ++i) {
            if (off[i] != 0) {
                positive = off[i] > 0;
                break;
            }
        }
        if (positive) out.push_back(Coord(std::span<const std::int32_t>(off)));
        int i = 0;
        for (; i < d; ++i) {
            if (off[i] < 1) {
                ++off[i];
                break;
            }
            off[i] = -1;
        }
        if (i == d) break;
    }
    return out;
}

std::vector<std::int32_t> component_labels(const VoxelSet& v, LatticeImpl impl) {
    const int d = v.dim();
    const auto& vox = v.voxels();
    UnionFind uf(vox.size());
    auto offsets = half_neighborhood(d);
    if (use_dense(v, impl, 0)) {
        Grid g(v, 0);
        std::vector<std::int32_t> id(g.cell.size(), -1);
        for (std::size_t i = 0; i < vox.size(); ++i) id[g.index(vox[i])] = static_cast<std::int32_t>(i);
        for (std::size_t i = 0; i < vox.size(); ++i) {
            for (const Coord& off : offsets) {
                Coord w = vox[i];
                for (int j = 0; j < d; ++j) w[j] += off[j];
                if (!g.in_bounds(w)) continue;
                std::int32_t other = id[g.index(w)];
                if (other >= 0) uf.unite(static_cast<std::int32_t>(i), other);
            }
        }
        std::vector<std::int32_t> root(vox.size());
        for (std::size_t i = 0; i < vox.size(); ++i) root[i] = uf.find(static_cast<std::int32_t>(i));
        return root;
    }
    for (std::size_t i = 0; i < vox.size(); ++i) {
        for (const Coord& off : offsets) {
            Coord w = vox[i];
            for (int j = 0; j < d; ++j) w[j] += off[j];
            auto it = std::lower_bound(vox.begin(), vox.end(), w);
            if (it != vox.end() && *it == w)
                uf.unite(static_cast<std::int32_t>(i), static_cast<std::int32_t>(it - vox.begin()));
        }
    }
    std::vector<std::int32_t> root(vox.size());
    for (std::size_t i = 0; i < vox.size(); ++i) root[i] = uf.find(static_cast<std::int32_t>(i));
    return root;
}

}  // namespace

bool are_neighbors(const Coord& v, const Coord& w) {
    if (v.dim() != w.dim()) throw std::invalid_argument("are_neighbors: dimension mismatch");
    for (int i = 0; i < v.dim(); ++i) {
        std::int64_t diff = static_cast<std::int64_t>(v[i]) - w[i];
        if (diff < -1 || diff > 1) return false;
    }
    return true;
}

VoxelSet VoxelSet::of(int dim, std::vector<Coord> voxels) {
    for (const Coord& c : voxels)
        if (c.dim() != dim) throw std::invalid_argument("VoxelSet: member dimension mismatch");
    std::sort(voxels.begin(), voxels.end());
    voxels.erase(std::unique(voxels.begin(), voxels.end()), voxels.end());
    VoxelSet s(dim);
    s.v_ = std::move(voxels);
    s.recompute_bbox();
    return s;
}

bool VoxelSet::contains(const Coord& c) const {
    auto it = std::lower_bound(v_.begin(), v_.end(), c);
    return it != v_.end() && *it == c;
}

void VoxelSet::recompute_bbox() {
    if (v_.empty()) return;
    bbox_min_ = bbox_max_ = v_.front();
    for (const Coord& c : v_) {
        for (int i = 0; i < dim_; ++i) {
            bbox_min_[i] = std::min(bbox_min_[i], c[i]);
            bbox_max_[i] = std::max(bbox_max_[i], c[i]);
        }
    }
}

std::uint64_t VoxelSet::bbox_volume() const {
    if (v_.empty()) return 0;
    return grid_cells(bbox_min_, bbox_max_, dim_, 0);
}

VoxelSet set_union(const VoxelSet& a, const VoxelSet& b) {
    check_same_dim(a, b);
    if (a.empty()) return b;
    if (b.empty()) return a;
    VoxelSet out(a.dim());
    out.v_.reserve(a.size() + b.size());
    std::set_union(a.v_.begin(), a.v_.end(), b.v_.begin(), b.v_.end(), std::back_inserter(out.v_));
    out.recompute_bbox();
    return out;
}

VoxelSet set_intersection(const VoxelSet& a, const VoxelSet& b) {
    check_same_dim(a, b);
    VoxelSet out(a.empty() ? b.dim() : a.dim());
    std::set_intersection(a.v_.begin(), a.v_.end(), b.v_.begin(), b.v_.end(), std::back_inserter(out.v_));
    out.recompute_bbox();
    return out;
}

VoxelSet set_difference(const VoxelSet& a, const VoxelSet& b) {
    check_same_dim(a, b);
    VoxelSet out(a.dim());
    std::set_difference(a.v_.begin(), a.v_.end(), b.v_.begin(), b.v_.end(), std::back_inserter(out.v_));
    out.recompute_bbox();
    return out;
}

bool is_subset(const VoxelSet& a, const VoxelSet& b) {
    if (a.empty()) return true;
    if (a.dim() != b.dim()) return false;
    return std::includes(b.voxels().begin(), b.voxels().end(), a.voxels().begin(), a.voxels().end());
}

VoxelSet cover(const VoxelSet& v, LatticeImpl impl) {
    if (v.empty()) return v;
    const int d = v.dim();
    for (const Coord& c : v.voxels()) check_cover_overflow(c);
    const std::uint32_t n_off = 1u << d;
    if (use_dense(v, impl, 1)) {
        Grid g(v, 1);
        std::vector<std::uint8_t> out(g.cell.size(), 0);
        for (const Coord& c : v.voxels()) {
            std::int64_t base = g.index(c);
            for (std::uint32_t m = 0; m < n_off; ++m) {
                std::int64_t idx = base;
                for (int i = 0; i < d; ++i)
                    if (m & (1u << i)) idx += g.stride[i];
                out[idx] = 1;
            }
        }
        std::vector<Coord> coords;
        coords.reserve(v.size() * 2);
        // decode set cells back to coordinates
        for (std::size_t idx = 0; idx < out.size(); ++idx) {
            if (!out[idx]) continue;
            Coord c = Coord::zeros(d);
            std::int64_t rem = static_cast<std::int64_t>(idx);
            for (int i = d - 1; i >= 0; --i) {
                c[i] = static_cast<std::int32_t>(rem / g.stride[i] + g.lo[i]);
                rem %= g.stride[i];
            }
            coords.push_back(c);
        }
        return VoxelSet::of(d, std::move(coords));
    }
    std::vector<Coord> coords;
    coords.reserve(v.size() * n_off);
    for (const Coord& c : v.voxels()) {
        for (std::uint32_t m = 0; m < n_off; ++m) {
            Coord w = c;
            for (int i = 0; i < d; ++i)
                if (m & (1u << i)) ++w[i];
            coords.push_back(w);
        }
    }
    return VoxelSet::of(d, std::move(coords));
}

VoxelSet interior(const VoxelSet& v, LatticeImpl impl) {
    if (v.empty()) return v;
    const int d = v.dim();
    const std::uint32_t n_off = 1u << d;
    std::vector<Coord> kept;
    if (use_dense(v, impl, 0)) {
        Grid g(v, 0);
        for (const Coord& c : v.voxels()) {
            bool all_in = true;
            for (std::uint32_t m = 1; m < n_off && all_in; ++m) {
                Coord w = c;
                for (int i = 0; i < d; ++i)
                    if (m & (1u << i)) ++w[i];
                all_in = g.test(w);
            }
            if (all_in) kept.push_back(c);
        }
    } else {
        for (const Coord& c : v.voxels()) {
            bool all_in = true;
            for (std::uint32_t m = 1; m < n_off && all_in; ++m) {
                Coord w = c;
                for (int i = 0; i < d; ++i)
                    if (m & (1u << i)) ++w[i];
                all_in = v.contains(w);
            }
            if (all_in) kept.push_back(c);
        }
    }
    return VoxelSet::of(d, std::move(kept));
}

VoxelSet shave(const VoxelSet& v) { return set_difference(v, interior(v)); }

ClusterDecomposition connected_components(const VoxelSet& v, LatticeImpl impl) {
    ClusterDecomposition out;
    if (v.empty()) return out;
    auto root = component_labels(v, impl);
    const auto& vox = v.voxels();
    std::vector<std::int32_t> order(root.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) { return root[a] < root[b]; });
    std::vector<std::vector<Coord>> groups;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        std::vector<Coord> grp;
        while (j < order.size() && root[order[j]] == root[order[i]]) grp.push_back(vox[order[j++]]);
        groups.push_back(std::move(grp));
        i = j;
    }
    for (auto& g : groups) out.clusters.push_back(VoxelSet::of(v.dim(), std::move(g)));
    std::sort(out.clusters.begin(), out.clusters.end(), [](const VoxelSet& a, const VoxelSet& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a.voxels().front() < b.voxels().front();
    });
    return out;
}

std::int64_t largest_cluster_size(const VoxelSet& v) {
    if (v.empty()) return 0;
    auto root = component_labels(v, LatticeImpl::Auto);
    std::vector<std::int64_t> count(root.size(), 0);
    std::int64_t best = 0;
    for (auto r : root) best = std::max(best, ++count[r]);
    return best;
}

VoxelSet prune(const VoxelSet& v, int i) {
    if (i < 0) throw std::invalid_argument("prune: negative iteration count");
    VoxelSet w = v;
    for (int j = 0; j < i && !w.empty(); ++j) w = interior(w);
    for (int j = 0; j < i && !w.empty(); ++j) w = cover(w);
    return w;
}

bool disconnected(const VoxelSet& a, const VoxelSet& b) {
    if (a.empty() || b.empty()) return true;
    check_same_dim(a, b);
    const VoxelSet& small = a.size() <= b.size() ? a : b;
    const VoxelSet& big = a.size() <= b.size() ? b : a;
    const int d = small.dim();
    std::vector<std::int32_t> off(d, -1);
    for (const Coord& c : small.voxels()) {
        std::fill(off.begin(), off.end(), -1);
        for (;;) {
            Coord w = c;
            for (int i = 0; i < d; ++i) w[i] += off[i];
            if (big.contains(w)) return false;
            int i = 0;
            for (; i < d; ++i) {
                if (off[i] < 1) {
                    ++off[i];
                    break;
                }
                off[i] = -1;
            }
            if (i == d) break;
        }
    }
    return true;
}

}  // namespace voxtdp
