#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace voxtdp {

// A lattice point in Z^d. The dimension is a runtime parameter, bounded by
// max_dim; unused components are kept at zero so equality and ordering can
// work on the full array.
class Coord {
public:
    static constexpr int max_dim = 6;

    Coord() = default;
    Coord(std::initializer_list<std::int32_t> xs) : dim_(static_cast<std::int8_t>(xs.size())) {
        if (xs.size() > max_dim) throw std::invalid_argument("Coord: dimension too large");
        int i = 0;
        for (auto v : xs) x_[i++] = v;
    }
    explicit Coord(std::span<const std::int32_t> xs) : dim_(static_cast<std::int8_t>(xs.size())) {
        if (xs.size() > max_dim) throw std::invalid_argument("Coord: dimension too large");
        for (std::size_t i = 0; i < xs.size(); ++i) x_[i] = xs[i];
    }
    static Coord zeros(int d) {
        Coord c;
        c.dim_ = static_cast<std::int8_t>(d);
        return c;
    }

    int dim() const { return dim_; }
    std::int32_t operator[](int i) const { return x_[i]; }
    std::int32_t& operator[](int i) { return x_[i]; }

    friend bool operator==(const Coord& a, const Coord& b) {
        return a.dim_ == b.dim_ && a.x_ == b.x_;
    }
    friend bool operator<(const Coord& a, const Coord& b) {
        if (a.dim_ != b.dim_) return a.dim_ < b.dim_;
        return a.x_ < b.x_;  // lexicographic
    }

private:
    std::int8_t dim_ = 0;
    std::array<std::int32_t, max_dim> x_{};
};

// Reflexive 26-connectivity adjacency: every coordinate difference in {-1,0,1}.
bool are_neighbors(const Coord& v, const Coord& w);

// A finite set of lattice points, stored sorted and duplicate-free. The empty
// set may carry any dimension; binary operations accept an empty operand of
// mismatched dimension.
class VoxelSet {
public:
    VoxelSet() = default;
    explicit VoxelSet(int dim) : dim_(dim) {}
    static VoxelSet of(int dim, std::vector<Coord> voxels);

    int dim() const { return dim_; }
    std::size_t size() const { return v_.size(); }
    bool empty() const { return v_.empty(); }
    bool contains(const Coord& c) const;
    const std::vector<Coord>& voxels() const { return v_; }

    // bounding box over member coordinates; valid only when non-empty
    const Coord& bbox_min() const { return bbox_min_; }
    const Coord& bbox_max() const { return bbox_max_; }
    std::uint64_t bbox_volume() const;

    friend bool operator==(const VoxelSet& a, const VoxelSet& b) {
        return a.v_ == b.v_ && (a.v_.empty() || a.dim_ == b.dim_);
    }

private:
    friend VoxelSet set_union(const VoxelSet&, const VoxelSet&);
    friend VoxelSet set_intersection(const VoxelSet&, const VoxelSet&);
    friend VoxelSet set_difference(const VoxelSet&, const VoxelSet&);
    void recompute_bbox();

    int dim_ = 0;
    std::vector<Coord> v_;
    Coord bbox_min_, bbox_max_;
};

VoxelSet set_union(const VoxelSet& a, const VoxelSet& b);
VoxelSet set_intersection(const VoxelSet& a, const VoxelSet& b);
VoxelSet set_difference(const VoxelSet& a, const VoxelSet& b);
bool is_subset(const VoxelSet& a, const VoxelSet& b);

struct ClusterDecomposition {
    std::vector<VoxelSet> clusters;  // size descending, ties by smallest member
    std::size_t size() const { return clusters.size(); }
};

// Strategy knob for the dense-bitmask fast path; Auto picks per bounding box.
// Sparse and Dense produce identical results (tested).
enum class LatticeImpl { Auto, Sparse, Dense };

// V+ : all v+e for e in {0,1}^d. Throws on int32 overflow of a coordinate.
VoxelSet cover(const VoxelSet& v, LatticeImpl impl = LatticeImpl::Auto);
// V- : members whose positive neighbors all lie in V.
VoxelSet interior(const VoxelSet& v, LatticeImpl impl = LatticeImpl::Auto);
// V0 = V \ V-
VoxelSet shave(const VoxelSet& v);

ClusterDecomposition connected_components(const VoxelSet& v, LatticeImpl impl = LatticeImpl::Auto);
// chi: size of the largest connected component (0 for the empty set).
std::int64_t largest_cluster_size(const VoxelSet& v);

// V^(i): i interior operations followed by i cover operations.
VoxelSet prune(const VoxelSet& v, int i);

// No voxel of a neighbors a voxel of b.
bool disconnected(const VoxelSet& a, const VoxelSet& b);

}  // namespace voxtdp
