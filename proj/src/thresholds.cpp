#include "voxtdp/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "voxtdp/parallel.hpp"

namespace voxtdp {

namespace {

void validate(std::uint64_t m, std::uint32_t n_perm, const MaskAdjacency& adj, double alpha) {
    if (m != adj.size()) throw std::invalid_argument("calibration: row length does not match adjacency");
    if (m == 0) throw std::invalid_argument("calibration: empty mask");
    if (n_perm < 2) throw std::invalid_argument("calibration: need at least 2 permutations");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("calibration: alpha outside (0,1)");
}

std::uint32_t quantile_index(std::uint32_t n, double alpha) {
    auto idx = static_cast<std::uint32_t>(std::ceil(static_cast<double>(n) * (1.0 - alpha)));
    return std::clamp<std::uint32_t>(idx, 1, n);
}

struct Scratch {
    std::vector<std::int32_t> order;
    std::vector<std::int32_t> parent;
    std::vector<std::int64_t> size;
    std::vector<std::uint8_t> inserted;
    std::vector<float> row;

    explicit Scratch(std::uint64_t m)
        : order(m), parent(m), size(m), inserted(m), row(m) {}

    std::int32_t find(std::int32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    std::int32_t unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return a;
        if (size[a] < size[b]) std::swap(a, b);
        parent[b] = a;
        size[a] += size[b];
        return a;
    }
    void begin(std::span<const float> values) {
        const auto m = static_cast<std::int32_t>(order.size());
        std::copy(values.begin(), values.end(), row.begin());
        std::iota(order.begin(), order.end(), 0);
        // descending z, ties by voxel index
        std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
            if (row[a] != row[b]) return row[a] > row[b];
            return a < b;
        });
        std::iota(parent.begin(), parent.end(), 0);
        std::fill(size.begin(), size.end(), 1);
        std::fill(inserted.begin(), inserted.end(), 0);
        (void)m;
    }
};

}  // namespace

MaskAdjacency build_adjacency(const VoxelSet& mask) {
    MaskAdjacency adj;
    adj.voxels = mask.voxels();
    const auto n = static_cast<std::int32_t>(adj.voxels.size());
    adj.nbr_begin.assign(n + 1, 0);
    if (n == 0) return adj;
    const int d = mask.dim();
    std::vector<std::int32_t> off(d, -1);
    std::vector<std::int32_t> tmp;
    for (std::int32_t i = 0; i < n; ++i) {
        tmp.clear();
        std::fill(off.begin(), off.end(), -1);
        for (;;) {
            bool zero = std::all_of(off.begin(), off.end(), [](std::int32_t x) { return x == 0; });
            if (!zero) {
                Coord w = adj.voxels[i];
                for (int b = 0; b < d; ++b) w[b] += off[b];
                auto it = std::lower_bound(adj.voxels.begin(), adj.voxels.end(), w);
                if (it != adj.voxels.end() && *it == w)
                    tmp.push_back(static_cast<std::int32_t>(it - adj.voxels.begin()));
            }
            int b = 0;
            for (; b < d; ++b) {
                if (off[b] < 1) {
                    ++off[b];
                    break;
                }
                off[b] = -1;
            }
            if (b == d) break;
        }
        adj.nbr_begin[i + 1] = adj.nbr_begin[i] + static_cast<std::int32_t>(tmp.size());
        adj.nbr.insert(adj.nbr.end(), tmp.begin(), tmp.end());
    }
    return adj;
}

Calibration find_z_for_k(std::uint64_t m, std::uint32_t n_perm, const RowSource& rows, const MaskAdjacency& adj,
                         std::int64_t k, double alpha, int threads) {
    validate(m, n_perm, adj, alpha);
    if (k < 0) throw std::invalid_argument("find_z_for_k: negative extent threshold");
    Calibration cal;
    cal.mode = CalibrationMode::fix_k;
    cal.alpha = alpha;
    cal.quantile_index = quantile_index(n_perm, alpha);
    cal.stats.assign(n_perm, 0.0);
    std::vector<std::uint8_t> ran_out(n_perm, 0);

    parallel_for(threads, n_perm, [&](std::uint32_t) { return std::make_unique<Scratch>(m); },
                 [&](std::uint32_t j, Scratch& s) {
                     rows(j, s.row);
                     s.begin(s.row);
                     double zj = -std::numeric_limits<double>::infinity();
                     bool found = false;
                     for (std::int32_t p = 0; p < static_cast<std::int32_t>(m); ++p) {
                         std::int32_t v = s.order[p];
                         s.inserted[v] = 1;
                         for (std::int32_t u : adj.neighbors(v))
                             if (s.inserted[u]) s.unite(v, u);
                         if (s.size[s.find(v)] > k) {
                             zj = s.row[v];
                             found = true;
                             break;
                         }
                     }
                     cal.stats[j] = zj;
                     ran_out[j] = !found;
                 });

    for (std::uint32_t j = 0; j < n_perm; ++j)
        if (ran_out[j]) cal.exhausted.push_back(j);
    std::vector<double> sorted = cal.stats;
    std::sort(sorted.begin(), sorted.end());
    cal.z_threshold = sorted[cal.quantile_index - 1];
    return cal;
}

Calibration find_z_for_k(const PermutationMatrix& perms, const MaskAdjacency& adj, std::int64_t k, double alpha,
                         int threads) {
    return find_z_for_k(perms.voxel_count, perms.n_perm,
                        [&](std::uint32_t j, std::span<float> out) {
                            auto r = perms.row(j);
                            std::copy(r.begin(), r.end(), out.begin());
                        },
                        adj, k, alpha, threads);
}

Calibration find_k_for_z(std::uint64_t m, std::uint32_t n_perm, const RowSource& rows, const MaskAdjacency& adj,
                         double z, double alpha, int threads) {
    validate(m, n_perm, adj, alpha);
    if (std::isnan(z)) throw std::invalid_argument("find_k_for_z: z is NaN");
    Calibration cal;
    cal.mode = CalibrationMode::fix_z;
    cal.alpha = alpha;
    cal.quantile_index = quantile_index(n_perm, alpha);
    cal.stats.assign(n_perm, 0.0);

    parallel_for(threads, n_perm, [&](std::uint32_t) { return std::make_unique<Scratch>(m); },
                 [&](std::uint32_t j, Scratch& s) {
                     rows(j, s.row);
                     s.begin(s.row);
                     std::int64_t best = 0;
                     for (std::int32_t p = 0; p < static_cast<std::int32_t>(m); ++p) {
                         std::int32_t v = s.order[p];
                         if (!(s.row[v] > z)) break;  // strict supra-threshold comparison
                         s.inserted[v] = 1;
                         for (std::int32_t u : adj.neighbors(v))
                             if (s.inserted[u]) s.unite(v, u);
                         best = std::max(best, s.size[s.find(v)]);
                     }
                     cal.stats[j] = static_cast<double>(best);
                 });

    std::vector<double> sorted = cal.stats;
    std::sort(sorted.begin(), sorted.end());
    cal.extent_threshold = static_cast<std::int64_t>(sorted[cal.quantile_index - 1]);
    return cal;
}

Calibration find_k_for_z(const PermutationMatrix& perms, const MaskAdjacency& adj, double z, double alpha,
                         int threads) {
    return find_k_for_z(perms.voxel_count, perms.n_perm,
                        [&](std::uint32_t j, std::span<float> out) {
                            auto r = perms.row(j);
                            std::copy(r.begin(), r.end(), out.begin());
                        },
                        adj, z, alpha, threads);
}

}  // namespace voxtdp
