#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "meshsampler/vec.hpp"

namespace meshsampler {

/// Decoded 8-bit RGB image, row-major, row 0 at the top.
struct TextureImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // width * height * 3

    Rgb8 at(int col, int row) const {
        const auto i = (static_cast<std::size_t>(row) * width + col) * 3;
        return {pixels[i], pixels[i + 1], pixels[i + 2]};
    }
};

struct Material {
    std::string name;
    std::array<double, 3> diffuse{0.5, 0.5, 0.5};
    std::shared_ptr<const TextureImage> texture;
};

struct Face {
    std::array<std::uint32_t, 3> v{};
    std::optional<std::array<std::uint32_t, 3>> uv;
    std::optional<std::uint32_t> material;
};

/// Indexed triangle soup. Faces are always triangles.
struct Mesh {
    std::vector<Vec3> vertices;
    std::vector<Vec2> uvs;
    std::vector<Face> faces;
    std::vector<Material> materials;

    Aabb bounds() const;
};

struct PointCloud {
    std::vector<Vec3> points;
    std::vector<Rgb8> colors;
    std::optional<int> grid_resolution;  // set iff voxelized

    std::size_t size() const { return points.size(); }
    friend bool operator==(const PointCloud&, const PointCloud&) = default;
};

enum class PlyEncoding { kAscii, kBinaryLittleEndian };

/// Non-fatal problems (missing MTL, missing texture, unknown material) are
/// appended to `warnings` when provided.
using Warnings = std::vector<std::string>;

Mesh parse_obj(std::istream& source, const std::filesystem::path& base_path, Warnings* warnings = nullptr);

/// Opens `path` and parses it with its parent directory as base path.
Mesh load_obj(const std::filesystem::path& path, Warnings* warnings = nullptr);

std::vector<Material> parse_mtl(std::istream& source, const std::filesystem::path& base_path,
                                Warnings* warnings = nullptr);

/// PNG or JPEG, detected from the file signature. Alpha is dropped and
/// grayscale is expanded to RGB.
TextureImage load_texture(const std::filesystem::path& path);
TextureImage decode_texture(std::span<const std::uint8_t> bytes, const std::string& origin);

/// Encodes an RGB image as PNG. Used by the fixture generator.
void write_png(const TextureImage& image, const std::filesystem::path& path);

void write_ply(const PointCloud& cloud, PlyEncoding encoding, std::ostream& sink);
PointCloud read_ply(std::istream& source);

void save_ply(const PointCloud& cloud, PlyEncoding encoding, const std::filesystem::path& path);
PointCloud load_ply(const std::filesystem::path& path);

}  // namespace meshsampler
