#include "voxtdp/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace voxtdp {

namespace {

// a * b, saturating instead of overflowing (values compared against k only)
std::int64_t mul_sat(std::int64_t a, std::int64_t b) {
    if (a == 0 || b == 0) return 0;
    if (a > std::numeric_limits<std::int64_t>::max() / b) return std::numeric_limits<std::int64_t>::max();
    return a * b;
}

std::int64_t pow_sat(std::int64_t base, int e) {
    std::int64_t out = 1;
    for (int i = 0; i < e; ++i) out = mul_sat(out, base);
    return out;
}

}  // namespace

std::int64_t integer_root(std::int64_t k, int d) {
    if (k < 0) throw std::invalid_argument("integer_root: negative argument");
    if (d < 1) throw std::invalid_argument("integer_root: dimension < 1");
    if (k == 0) return 0;
    auto est = static_cast<std::int64_t>(std::pow(static_cast<double>(k), 1.0 / d));
    std::int64_t q = std::max<std::int64_t>(est - 2, 0);
    while (pow_sat(q + 1, d) <= k) ++q;
    return q;
}

BoxCounts box_counts(int d, std::int64_t k) {
    if (d < 1) throw std::invalid_argument("box_counts: dimension < 1");
    if (k < 1) throw std::invalid_argument("box_counts: k < 1");
    const std::int64_t q = integer_root(k, d);
    BoxCounts out;
    out.d = d;
    out.k = k;
    out.l = 0;
    out.b = pow_sat(q, d);
    for (int l = 1; l <= d; ++l) {
        std::int64_t p = mul_sat(pow_sat(q, d - l), pow_sat(q + 1, l));
        if (p > k) break;
        out.l = l;
        out.b = p;
    }
    out.b_plus = mul_sat(pow_sat(q + 1, d - static_cast<int>(out.l)), pow_sat(q + 2, static_cast<int>(out.l)));
    return out;
}

std::int64_t min_cover_size(int d, std::int64_t k) {
    if (d < 1) throw std::invalid_argument("min_cover_size: dimension < 1");
    if (k < 0) throw std::invalid_argument("min_cover_size: k < 0");
    if (k == 0) return 0;
    if (d == 1) return k + 1;
    BoxCounts bc = box_counts(d, k);
    return bc.b_plus + min_cover_size(d - 1, k - bc.b);
}

VoxelSet min_cover_witness(int d, std::int64_t k) {
    if (d < 1) throw std::invalid_argument("min_cover_witness: dimension < 1");
    if (k == 0) return VoxelSet(d);
    if (d == 1) {
        std::vector<Coord> pts;
        for (std::int64_t i = 1; i <= k; ++i) pts.push_back(Coord{static_cast<std::int32_t>(i)});
        return VoxelSet::of(1, std::move(pts));
    }
    BoxCounts bc = box_counts(d, k);
    const std::int64_t q = integer_root(k, d);
    std::vector<Coord> pts;
    // box with side q+1 in the first l dimensions and q in the rest
    std::vector<std::int32_t> cur(d, 1);
    for (;;) {
        pts.push_back(Coord(std::span<const std::int32_t>(cur)));
        int i = 0;
        for (; i < d; ++i) {
            const std::int32_t side = static_cast<std::int32_t>(i < bc.l ? q + 1 : q);
            if (cur[i] < side) {
                ++cur[i];
                break;
            }
            cur[i] = 1;
        }
        if (i == d) break;
    }
    // recursive remainder stacked on the face at coordinate q+1 in dim l
    VoxelSet rest = min_cover_witness(d - 1, k - bc.b);
    for (const Coord& w : rest.voxels()) {
        std::vector<std::int32_t> c(d);
        for (std::int64_t i = 0; i < bc.l; ++i) c[i] = w[static_cast<int>(i)];
        c[bc.l] = static_cast<std::int32_t>(q + 1);
        for (int i = static_cast<int>(bc.l) + 1; i < d; ++i) c[i] = w[i - 1];
        pts.push_back(Coord(std::span<const std::int32_t>(c)));
    }
    return VoxelSet::of(d, std::move(pts));
}

RatioTable::RatioTable(int d, std::int64_t k_max) : d_(d) {
    if (d < 1) throw std::invalid_argument("RatioTable: dimension < 1");
    if (k_max < 0) throw std::invalid_argument("RatioTable: negative k_max");
    f_.resize(k_max + 1);
    ratio_.resize(k_max + 1);
    cap_.resize(k_max + 1);
    f_[0] = 0;
    ratio_[0] = Rat(1);
    cap_[0] = Rat(1);  // s_0(V) = |V|
    for (std::int64_t k = 1; k <= k_max; ++k) {
        f_[k] = min_cover_size(d, k);
        Rat rk(f_[k] - k, f_[k]);
        ratio_[k] = std::min(ratio_[k - 1], rk);
        BoxCounts bc = box_counts(d, k);
        cap_[k] = Rat(bc.b_plus - bc.b, bc.b_plus);
    }
}

Rat RatioTable::ratio(std::int64_t k) const {
    if (k < 0 || k >= static_cast<std::int64_t>(ratio_.size()))
        throw std::out_of_range("RatioTable::ratio: k outside table");
    return ratio_[k];
}

Rat RatioTable::fraction_cap(std::int64_t k) const {
    if (k < 1 || k >= static_cast<std::int64_t>(cap_.size()))
        throw std::out_of_range("RatioTable::fraction_cap: k outside table");
    return cap_[k];
}

std::int64_t RatioTable::cover_min(std::int64_t k) const {
    if (k < 0 || k >= static_cast<std::int64_t>(f_.size()))
        throw std::out_of_range("RatioTable::cover_min: k outside table");
    return f_[k];
}

Rat max_achievable_tdp(const RatioTable& table, std::int64_t k_extent, std::int64_t cluster_size) {
    if (cluster_size < 1) throw std::invalid_argument("max_achievable_tdp: cluster size < 1");
    const Rat rk = table.ratio(k_extent);
    const Rat rs = table.ratio(cluster_size);
    const Rat one(1);
    // rs < 1 whenever cluster_size >= 1, so the denominator never vanishes
    std::int64_t numer = rat_ceil((rk - rs) / (one - rs) * Rat(cluster_size));
    std::int64_t indicator = cluster_size > k_extent ? 1 : 0;
    std::int64_t cap = std::max(numer, indicator);
    cap = std::clamp<std::int64_t>(cap, 0, cluster_size);
    return Rat(cap, cluster_size);
}

Rat max_achievable_tdp(int d, std::int64_t k_extent, std::int64_t cluster_size) {
    RatioTable table(d, std::max(k_extent, cluster_size));
    return max_achievable_tdp(table, k_extent, cluster_size);
}

std::optional<std::int64_t> min_cluster_size_for_tdp(int d, std::int64_t k_extent, const Rat& target) {
    if (target <= Rat(0)) return 1;
    if (target > Rat(1)) return std::nullopt;
    RatioTable head(d, k_extent);
    const Rat rk = head.ratio(k_extent);
    if (target > rk) return std::nullopt;       // ratio(.) never exceeds r_{k_M} again
    const Rat level = (rk - target) / (Rat(1) - target);
    if (level <= Rat(0)) return std::nullopt;   // ratio(.) is strictly positive
    // ratio(.) is non-increasing and tends to zero; grow the table until it
    // crosses the level
    std::int64_t hi = std::max<std::int64_t>(16, k_extent);
    for (;;) {
        RatioTable table(d, hi);
        if (table.ratio(hi) <= level) {
            std::int64_t lo = 0;
            std::int64_t high = hi;
            while (lo < high) {
                std::int64_t mid = lo + (high - lo) / 2;
                if (table.ratio(mid) <= level)
                    high = mid;
                else
                    lo = mid + 1;
            }
            return lo;
        }
        if (hi > (1ll << 40)) return std::nullopt;
        hi *= 2;
    }
}

}  // namespace voxtdp
