#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "voxtdp/thresholds.hpp"
#include "voxtdp/volume.hpp"

namespace voxtdp {

// Malformed or truncated input files; messages carry byte offsets.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class VvolType : std::uint8_t { f32 = 0, u8 = 1, u16 = 2 };

// Dense volume container as read from a VVOL file:
// magic "VVOL", u32 version, u32 d, u64 extents[d], u8 dtype, then the
// little-endian payload.
struct VolumeData {
    GridShape shape;
    VvolType dtype = VvolType::f32;
    std::vector<float> f32;
    std::vector<std::uint8_t> u8;
    std::vector<std::uint16_t> u16;
};

VolumeData read_vvol(const std::string& path);
void write_vvol(const std::string& path, const GridShape& shape, const std::vector<float>& data);
void write_vvol(const std::string& path, const GridShape& shape, const std::vector<std::uint8_t>& data);
void write_vvol(const std::string& path, const GridShape& shape, const std::vector<std::uint16_t>& data);

// Permutation matrix file: magic "PZMX", u32 version, u32 N, u64 m, then N
// rows of little-endian f32.
PermutationMatrix read_pzmx(const std::string& path);
void write_pzmx(const std::string& path, const PermutationMatrix& perms);

// Region query: either an explicit voxel list or a set of atlas labels.
struct RegionSpec {
    std::string name;
    std::optional<VoxelSet> voxels;
    std::vector<std::uint16_t> atlas_labels;
};

std::vector<RegionSpec> read_regions_json(const std::string& path, int expected_dim);

}  // namespace voxtdp
