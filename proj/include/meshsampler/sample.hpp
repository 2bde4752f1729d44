#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "meshsampler/geometry.hpp"
#include "meshsampler/mesh_io.hpp"

namespace meshsampler {

/// Running area sums over the non-degenerate faces of a mesh, in face order.
struct AreaCdf {
    std::vector<double> cumulative;
    std::vector<std::uint32_t> face_map;

    double total() const { return cumulative.empty() ? 0.0 : cumulative.back(); }
    /// Index into face_map for a uniform draw u in [0,1).
    std::size_t pick(double u) const;
};

enum class TextureFilter { kNearest, kBilinear };
enum class TextureWrap { kRepeat, kClamp };

struct SampleConfig {
    std::size_t n_points = 100000;
    std::uint64_t seed = 1;
    TextureFilter texture_filter = TextureFilter::kBilinear;
    TextureWrap wrap = TextureWrap::kRepeat;
    bool flip_v = true;
};

struct Barycentric {
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;
};

struct SurfacePoint {
    Vec3 position;
    Barycentric weights;
};

/// Throws EmptySurfaceError when no face has positive area.
AreaCdf build_area_cdf(const Mesh& mesh);

/// Square-root warp: uniform over the triangle for uniform r1, r2.
SurfacePoint sample_point_on_face(const Triangle& t, double r1, double r2);

/// Color of the surface at the given barycentric location of a face. Only
/// the filter, wrap and flip settings of `cfg` are used.
Rgb8 lookup_color(const Mesh& mesh, std::size_t face, const Barycentric& w, const SampleConfig& cfg);

/// Texel fetch with wrap/flip/filter applied to a texture coordinate.
Rgb8 sample_texture(const TextureImage& image, Vec2 uv, const SampleConfig& cfg);

/// Exactly cfg.n_points colored samples, a pure function of (mesh, cfg).
/// When `source_faces` is given it receives the generating face of each point.
PointCloud sample_mesh(const Mesh& mesh, const SampleConfig& cfg, int threads = 1,
                       std::vector<std::uint32_t>* source_faces = nullptr);

/// Half-up rounding of a [0,1] channel to 8 bits.
std::uint8_t to_byte(double unit);

}  // namespace meshsampler
