#include <algorithm>
#include <cmath>

#include "meshsampler/errors.hpp"
#include "meshsampler/parallel.hpp"
#include "meshsampler/rng.hpp"
#include "meshsampler/sample.hpp"

namespace meshsampler {
namespace {

// Fractional part in [0,1), or clamp to [0,1].
double wrap_coord(double x, TextureWrap wrap) {
    if (wrap == TextureWrap::kClamp) return std::clamp(x, 0.0, 1.0);
    const double f = x - std::floor(x);
    return f >= 1.0 ? 0.0 : f;
}

int wrap_texel(long long i, int size, TextureWrap wrap) {
    if (wrap == TextureWrap::kClamp) return static_cast<int>(std::clamp<long long>(i, 0, size - 1));
    const long long m = i % size;
    return static_cast<int>(m < 0 ? m + size : m);
}

}  // namespace

std::uint8_t to_byte(double unit) {
    const double scaled = std::floor(std::clamp(unit, 0.0, 1.0) * 255.0 + 0.5);
    return static_cast<std::uint8_t>(scaled);
}

std::size_t AreaCdf::pick(double u) const {
    const double target = u * total();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    const auto idx = static_cast<std::size_t>(it - cumulative.begin());
    return std::min(idx, cumulative.size() - 1);
}

AreaCdf build_area_cdf(const Mesh& mesh) {
    AreaCdf cdf;
    double running = 0.0;
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        if (is_degenerate_face(mesh, f)) continue;
        const auto& v = mesh.faces[f].v;
        running += face_area({mesh.vertices[v[0]], mesh.vertices[v[1]], mesh.vertices[v[2]], 0});
        cdf.cumulative.push_back(running);
        cdf.face_map.push_back(static_cast<std::uint32_t>(f));
    }
    if (cdf.cumulative.empty() || !(running > 0.0)) throw EmptySurfaceError("mesh has no face with positive area");
    return cdf;
}

SurfacePoint sample_point_on_face(const Triangle& t, double r1, double r2) {
    const double s = std::sqrt(r1);
    const Barycentric w{1.0 - s, s * (1.0 - r2), s * r2};
    return {t.a * w.a + t.b * w.b + t.c * w.c, w};
}

Rgb8 sample_texture(const TextureImage& image, Vec2 uv, const SampleConfig& cfg) {
    const double u = wrap_coord(uv.u, cfg.wrap);
    double v = wrap_coord(uv.v, cfg.wrap);
    // Row 0 is the top of the image, i.e. v = 1 when flipping.
    if (cfg.flip_v) v = 1.0 - v;
    const double x = u * image.width;
    const double y = v * image.height;

    if (cfg.texture_filter == TextureFilter::kNearest) {
        const int col = wrap_texel(static_cast<long long>(std::floor(x)), image.width, cfg.wrap);
        const int row = wrap_texel(static_cast<long long>(std::floor(y)), image.height, cfg.wrap);
        return image.at(col, row);
    }

    // Bilinear over texel centers.
    const double fx = x - 0.5;
    const double fy = y - 0.5;
    const double x0 = std::floor(fx);
    const double y0 = std::floor(fy);
    const double tx = fx - x0;
    const double ty = fy - y0;
    const int c0 = wrap_texel(static_cast<long long>(x0), image.width, cfg.wrap);
    const int c1 = wrap_texel(static_cast<long long>(x0) + 1, image.width, cfg.wrap);
    const int r0 = wrap_texel(static_cast<long long>(y0), image.height, cfg.wrap);
    const int r1 = wrap_texel(static_cast<long long>(y0) + 1, image.height, cfg.wrap);
    const Rgb8 p00 = image.at(c0, r0);
    const Rgb8 p10 = image.at(c1, r0);
    const Rgb8 p01 = image.at(c0, r1);
    const Rgb8 p11 = image.at(c1, r1);
    const double w00 = (1 - tx) * (1 - ty);
    const double w10 = tx * (1 - ty);
    const double w01 = (1 - tx) * ty;
    const double w11 = tx * ty;
    const auto mix = [&](auto channel) {
        const double value = w00 * channel(p00) + w10 * channel(p10) + w01 * channel(p01) + w11 * channel(p11);
        return static_cast<std::uint8_t>(std::clamp(std::floor(value + 0.5), 0.0, 255.0));
    };
    return {mix([](Rgb8 p) { return double(p.r); }), mix([](Rgb8 p) { return double(p.g); }),
            mix([](Rgb8 p) { return double(p.b); })};
}

Rgb8 lookup_color(const Mesh& mesh, std::size_t face, const Barycentric& w, const SampleConfig& cfg) {
    const Face& f = mesh.faces[face];
    if (!f.material) return {to_byte(0.5), to_byte(0.5), to_byte(0.5)};
    const Material& m = mesh.materials[*f.material];
    if (m.texture && f.uv) {
        const Vec2& a = mesh.uvs[(*f.uv)[0]];
        const Vec2& b = mesh.uvs[(*f.uv)[1]];
        const Vec2& c = mesh.uvs[(*f.uv)[2]];
        const Vec2 uv{w.a * a.u + w.b * b.u + w.c * c.u, w.a * a.v + w.b * b.v + w.c * c.v};
        return sample_texture(*m.texture, uv, cfg);
    }
    return {to_byte(m.diffuse[0]), to_byte(m.diffuse[1]), to_byte(m.diffuse[2])};
}

PointCloud sample_mesh(const Mesh& mesh, const SampleConfig& cfg, int threads,
                       std::vector<std::uint32_t>* source_faces) {
    if (cfg.n_points < 1) throw std::invalid_argument("point count must be >= 1");
    const AreaCdf cdf = build_area_cdf(mesh);
    const Philox4x32 rng(cfg.seed);

    PointCloud cloud;
    cloud.points.resize(cfg.n_points);
    cloud.colors.resize(cfg.n_points);
    if (source_faces) source_faces->resize(cfg.n_points);
    parallel_for(cfg.n_points, threads, [&](std::size_t i) {
        const auto bits = rng(rng_counter(i, 0, RngStream::kSurfaceSamples));
        const std::uint32_t face = cdf.face_map[cdf.pick(unit_from_u64(bits[0], bits[1]))];
        const auto& v = mesh.faces[face].v;
        const Triangle tri{mesh.vertices[v[0]], mesh.vertices[v[1]], mesh.vertices[v[2]], face};
        const SurfacePoint sp = sample_point_on_face(tri, unit_from_u32(bits[2]), unit_from_u32(bits[3]));
        cloud.points[i] = sp.position;
        cloud.colors[i] = lookup_color(mesh, face, sp.weights, cfg);
        if (source_faces) (*source_faces)[i] = face;
    }, 1024);
    return cloud;
}

}  // namespace meshsampler
