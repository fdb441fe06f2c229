#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "voxtdp/lattice.hpp"

namespace voxtdp {

// Dense d-dimensional grid; linear index runs fastest along the first axis.
struct GridShape {
    std::vector<std::uint64_t> extents;

    int dim() const { return static_cast<int>(extents.size()); }
    std::uint64_t volume() const;
    bool in_bounds(const Coord& c) const;
    std::uint64_t linear(const Coord& c) const;
    Coord coord(std::uint64_t index) const;

    friend bool operator==(const GridShape& a, const GridShape& b) { return a.extents == b.extents; }
};

// z-scores over a grid, with the analysis mask and the full brain extent.
struct ZVolume {
    GridShape shape;
    std::vector<float> values;  // shape.volume() entries
    VoxelSet mask;              // M
    VoxelSet brain;             // B, mask subset of brain

    float at(const Coord& c) const { return values[shape.linear(c)]; }
    void validate() const;
};

// integer label per voxel; 0 is background
struct AtlasVolume {
    GridShape shape;
    std::vector<std::uint16_t> labels;
    std::map<std::uint16_t, std::string> names;

    std::uint16_t at(const Coord& c) const { return labels[shape.linear(c)]; }
    VoxelSet region(std::uint16_t label) const;
    std::vector<std::uint16_t> present_labels() const;
    std::string name_of(std::uint16_t label) const;
};

VoxelSet mask_from_u8(const GridShape& shape, const std::vector<std::uint8_t>& data);

}  // namespace voxtdp
