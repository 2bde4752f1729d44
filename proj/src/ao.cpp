#include <cmath>
#include <numbers>
#include <stdexcept>

#include "meshsampler/ao.hpp"
#include "meshsampler/parallel.hpp"
#include "meshsampler/rng.hpp"
#include "meshsampler/sample.hpp"

namespace meshsampler {

std::vector<Vec3> generate_directions(int n) {
    if (n < 1) throw std::invalid_argument("direction count must be >= 1");
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    std::vector<Vec3> dirs;
    dirs.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / n;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden_angle * i;
        dirs.push_back({r * std::cos(phi), r * std::sin(phi), z});
    }
    return dirs;
}

FaceQuality compute_face_quality(const Mesh& mesh, const Bvh& bvh, const AoConfig& cfg, int threads) {
    if (cfg.n_directions < 1 || cfg.samples_per_face < 1) {
        throw std::invalid_argument("AO needs at least one direction and one sample per face");
    }
    const auto dirs = generate_directions(cfg.n_directions);
    const Philox4x32 rng(cfg.seed);
    const double offset = bvh.epsilon();
    const double pairs = static_cast<double>(cfg.n_directions) * cfg.samples_per_face;

    FaceQuality quality;
    quality.values.assign(mesh.faces.size(), 0.0);
    parallel_for(
        mesh.faces.size(), threads,
        [&](std::size_t f) {
            if (is_degenerate_face(mesh, f)) return;
            const auto& face = mesh.faces[f];
            const Triangle tri{mesh.vertices[face.v[0]], mesh.vertices[face.v[1]], mesh.vertices[face.v[2]],
                               static_cast<std::uint32_t>(f)};
            const Vec3 n = face_normal(tri);
            std::size_t visible = 0;
            for (int s = 0; s < cfg.samples_per_face; ++s) {
                Vec3 p;
                if (s == 0) {
                    p = (tri.a + tri.b + tri.c) * (1.0 / 3.0);
                } else {
                    const auto bits = rng(rng_counter(f, static_cast<std::uint32_t>(s), RngStream::kAoSamples));
                    p = sample_point_on_face(tri, unit_from_u32(bits[0]), unit_from_u32(bits[1])).position;
                }
                const Vec3 origin = p + n * offset;
                for (const Vec3& d : dirs) {
                    if (dot(n, d) <= 0.0) continue;
                    if (!bvh.occluded({origin, d}, static_cast<std::uint32_t>(f))) ++visible;
                }
            }
            quality.values[f] = static_cast<double>(visible) / pairs;
        },
        16);
    return quality;
}

}  // namespace meshsampler
