#include "voxtdp/volume.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace voxtdp {

std::uint64_t GridShape::volume() const {
    std::uint64_t v = 1;
    for (auto e : extents) v *= e;
    return v;
}

bool GridShape::in_bounds(const Coord& c) const {
    if (c.dim() != dim()) return false;
    for (int i = 0; i < dim(); ++i)
        if (c[i] < 0 || static_cast<std::uint64_t>(c[i]) >= extents[i]) return false;
    return true;
}

std::uint64_t GridShape::linear(const Coord& c) const {
    if (!in_bounds(c)) throw std::out_of_range("GridShape::linear: coordinate outside grid");
    std::uint64_t idx = 0, stride = 1;
    for (int i = 0; i < dim(); ++i) {
        idx += static_cast<std::uint64_t>(c[i]) * stride;
        stride *= extents[i];
    }
    return idx;
}

Coord GridShape::coord(std::uint64_t index) const {
    Coord c = Coord::zeros(dim());
    for (int i = 0; i < dim(); ++i) {
        c[i] = static_cast<std::int32_t>(index % extents[i]);
        index /= extents[i];
    }
    return c;
}

void ZVolume::validate() const {
    if (values.size() != shape.volume()) throw std::invalid_argument("ZVolume: value count does not match shape");
    if (!mask.empty() && mask.dim() != shape.dim()) throw std::invalid_argument("ZVolume: mask dimension mismatch");
    if (!is_subset(mask, brain)) throw std::invalid_argument("ZVolume: mask must be a subset of the brain");
    for (const Coord& c : brain.voxels())
        if (!shape.in_bounds(c)) throw std::invalid_argument("ZVolume: brain voxel outside grid");
    for (const Coord& c : mask.voxels())
        if (!std::isfinite(at(c))) throw std::invalid_argument("ZVolume: non-finite z-score inside mask");
}

VoxelSet AtlasVolume::region(std::uint16_t label) const {
    std::vector<Coord> pts;
    for (std::uint64_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) pts.push_back(shape.coord(i));
    return VoxelSet::of(shape.dim(), std::move(pts));
}

std::vector<std::uint16_t> AtlasVolume::present_labels() const {
    std::vector<std::uint16_t> out(labels.begin(), labels.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    std::erase(out, static_cast<std::uint16_t>(0));
    return out;
}

std::string AtlasVolume::name_of(std::uint16_t label) const {
    auto it = names.find(label);
    if (it != names.end()) return it->second;
    return "label_" + std::to_string(label);
}

VoxelSet mask_from_u8(const GridShape& shape, const std::vector<std::uint8_t>& data) {
    if (data.size() != shape.volume()) throw std::invalid_argument("mask_from_u8: size mismatch");
    std::vector<Coord> pts;
    for (std::uint64_t i = 0; i < data.size(); ++i)
        if (data[i]) pts.push_back(shape.coord(i));
    return VoxelSet::of(shape.dim(), std::move(pts));
}

}  // namespace voxtdp
