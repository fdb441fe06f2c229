#include "voxtdp/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace voxtdp {

static_assert(std::endian::native == std::endian::little, "file formats assume a little-endian host");

namespace {

std::vector<char> read_all(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(path + ": cannot open");
    in.seekg(0, std::ios::end);
    auto len = static_cast<std::size_t>(in.tellg());
    in.seekg(0);
    std::vector<char> buf(len);
    if (len > 0) in.read(buf.data(), static_cast<std::streamsize>(len));
    if (!in) throw DataError(path + ": short read");
    return buf;
}

class Reader {
public:
    Reader(std::string path, std::vector<char> buf) : path_(std::move(path)), buf_(std::move(buf)) {}

    template <typename T>
    T get() {
        if (pos_ + sizeof(T) > buf_.size())
            throw DataError(path_ + ": truncated at byte " + std::to_string(pos_) + ", expected " +
                            std::to_string(sizeof(T)) + " more bytes of " + std::to_string(buf_.size()) + " total");
        T out;
        std::memcpy(&out, buf_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return out;
    }

    void get_bytes(void* dst, std::size_t n, const char* what) {
        if (pos_ + n > buf_.size())
            throw DataError(path_ + ": truncated " + what + " at byte " + std::to_string(pos_) + ": expected " +
                            std::to_string(n) + " bytes, found " + std::to_string(buf_.size() - pos_));
        std::memcpy(dst, buf_.data() + pos_, n);
        pos_ += n;
    }

    void expect_magic(const char (&magic)[5]) {
        char got[4];
        get_bytes(got, 4, "magic");
        if (std::memcmp(got, magic, 4) != 0)
            throw DataError(path_ + ": bad magic at byte 0, expected \"" + std::string(magic, 4) + "\" got \"" +
                            std::string(got, 4) + "\"");
    }

    std::size_t pos() const { return pos_; }
    std::size_t remaining() const { return buf_.size() - pos_; }
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::vector<char> buf_;
    std::size_t pos_ = 0;
};

void write_header(std::ofstream& out, const GridShape& shape, VvolType dtype) {
    out.write("VVOL", 4);
    std::uint32_t version = 1;
    out.write(reinterpret_cast<const char*>(&version), 4);
    std::uint32_t d = static_cast<std::uint32_t>(shape.dim());
    out.write(reinterpret_cast<const char*>(&d), 4);
    for (auto e : shape.extents) out.write(reinterpret_cast<const char*>(&e), 8);
    std::uint8_t t = static_cast<std::uint8_t>(dtype);
    out.write(reinterpret_cast<const char*>(&t), 1);
}

template <typename T>
void write_vvol_impl(const std::string& path, const GridShape& shape, const std::vector<T>& data, VvolType dtype) {
    if (data.size() != shape.volume()) throw std::invalid_argument("write_vvol: payload size mismatch");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(path + ": cannot open for writing");
    write_header(out, shape, dtype);
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(T)));
    if (!out) throw DataError(path + ": write failed");
}

}  // namespace

VolumeData read_vvol(const std::string& path) {
    Reader r(path, read_all(path));
    r.expect_magic("VVOL");
    auto version = r.get<std::uint32_t>();
    if (version != 1) throw DataError(path + ": unsupported VVOL version " + std::to_string(version));
    auto d = r.get<std::uint32_t>();
    if (d < 1 || d > static_cast<std::uint32_t>(Coord::max_dim))
        throw DataError(path + ": dimension " + std::to_string(d) + " outside supported range");
    VolumeData vol;
    vol.shape.extents.resize(d);
    for (std::uint32_t i = 0; i < d; ++i) vol.shape.extents[i] = r.get<std::uint64_t>();
    auto t = r.get<std::uint8_t>();
    const std::uint64_t n = vol.shape.volume();
    if (n > (1ull << 32)) throw DataError(path + ": volume too large");
    switch (t) {
        case 0:
            vol.dtype = VvolType::f32;
            vol.f32.resize(n);
            r.get_bytes(vol.f32.data(), n * 4, "f32 payload");
            break;
        case 1:
            vol.dtype = VvolType::u8;
            vol.u8.resize(n);
            r.get_bytes(vol.u8.data(), n, "u8 payload");
            break;
        case 2:
            vol.dtype = VvolType::u16;
            vol.u16.resize(n);
            r.get_bytes(vol.u16.data(), n * 2, "u16 payload");
            break;
        default:
            throw DataError(path + ": unknown dtype code " + std::to_string(t) + " at byte " +
                            std::to_string(r.pos() - 1));
    }
    if (r.remaining() != 0)
        throw DataError(path + ": " + std::to_string(r.remaining()) + " trailing bytes after payload");
    return vol;
}

void write_vvol(const std::string& path, const GridShape& shape, const std::vector<float>& data) {
    write_vvol_impl(path, shape, data, VvolType::f32);
}
void write_vvol(const std::string& path, const GridShape& shape, const std::vector<std::uint8_t>& data) {
    write_vvol_impl(path, shape, data, VvolType::u8);
}
void write_vvol(const std::string& path, const GridShape& shape, const std::vector<std::uint16_t>& data) {
    write_vvol_impl(path, shape, data, VvolType::u16);
}

PermutationMatrix read_pzmx(const std::string& path) {
    Reader r(path, read_all(path));
    r.expect_magic("PZMX");
    auto version = r.get<std::uint32_t>();
    if (version != 1) throw DataError(path + ": unsupported PZMX version " + std::to_string(version));
    PermutationMatrix out;
    out.n_perm = r.get<std::uint32_t>();
    out.voxel_count = r.get<std::uint64_t>();
    if (out.n_perm < 1) throw DataError(path + ": permutation count is zero");
    const std::uint64_t n = out.voxel_count * out.n_perm;
    if (n > (1ull << 33)) throw DataError(path + ": matrix too large");
    out.values.resize(n);
    r.get_bytes(out.values.data(), n * 4, "permutation rows");
    if (r.remaining() != 0)
        throw DataError(path + ": " + std::to_string(r.remaining()) + " trailing bytes after payload");
    return out;
}

void write_pzmx(const std::string& path, const PermutationMatrix& perms) {
    if (perms.values.size() != perms.voxel_count * perms.n_perm)
        throw std::invalid_argument("write_pzmx: value count mismatch");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(path + ": cannot open for writing");
    out.write("PZMX", 4);
    std::uint32_t version = 1;
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&perms.n_perm), 4);
    out.write(reinterpret_cast<const char*>(&perms.voxel_count), 8);
    out.write(reinterpret_cast<const char*>(perms.values.data()),
              static_cast<std::streamsize>(perms.values.size() * 4));
    if (!out) throw DataError(path + ": write failed");
}

std::vector<RegionSpec> read_regions_json(const std::string& path, int expected_dim) {
    std::ifstream in(path);
    if (!in) throw DataError(path + ": cannot open");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path + ": invalid JSON: " + e.what());
    }
    if (!doc.is_array()) throw DataError(path + ": expected a JSON array of regions");
    std::vector<RegionSpec> out;
    for (const auto& item : doc) {
        RegionSpec spec;
        if (!item.contains("name") || !item["name"].is_string())
            throw DataError(path + ": region without a string name");
        spec.name = item["name"].get<std::string>();
        if (item.contains("voxels")) {
            std::vector<Coord> pts;
            for (const auto& vox : item["voxels"]) {
                if (!vox.is_array() || static_cast<int>(vox.size()) != expected_dim)
                    throw DataError(path + ": region '" + spec.name + "': voxel arity does not match volume dimension");
                std::vector<std::int32_t> comp;
                for (const auto& x : vox) comp.push_back(x.get<std::int32_t>());
                pts.push_back(Coord(std::span<const std::int32_t>(comp)));
            }
            spec.voxels = VoxelSet::of(expected_dim, std::move(pts));
        }
        if (item.contains("labels")) {
            for (const auto& l : item["labels"]) spec.atlas_labels.push_back(l.get<std::uint16_t>());
        }
        if (!spec.voxels && spec.atlas_labels.empty())
            throw DataError(path + ": region '" + spec.name + "' has neither voxels nor labels");
        out.push_back(std::move(spec));
    }
    return out;
}

}  // namespace voxtdp
