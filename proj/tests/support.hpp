#pragma once

// Test-only helpers: temporary directories, in-memory fixture meshes and
// brute-force oracles that deliberately avoid the library's code paths.

#include <atomic>
#include <cmath>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <unistd.h>

#include "meshsampler/ao.hpp"
#include "meshsampler/geometry.hpp"
#include "meshsampler/mesh_io.hpp"
#include "meshsampler/rng.hpp"

namespace testing_support {

using namespace meshsampler;

class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("meshsampler_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

/// Axis-aligned cube [lo, hi]^3 appended to `mesh` with outward (or inward) winding.
inline void add_cube(Mesh& mesh, double lo, double hi, bool inward = false,
                     std::optional<std::uint32_t> material = std::nullopt, bool share_vertices_with_last = false) {
    const auto base = static_cast<std::uint32_t>(share_vertices_with_last ? mesh.vertices.size() - 8
                                                                          : mesh.vertices.size());
    if (!share_vertices_with_last) {
        for (int i = 0; i < 8; ++i) {
            const bool x = (i == 1 || i == 2 || i == 5 || i == 6);
            const bool y = (i == 2 || i == 3 || i == 6 || i == 7);
            const bool z = i >= 4;
            mesh.vertices.push_back({x ? hi : lo, y ? hi : lo, z ? hi : lo});
        }
    }
    const int quads[6][4] = {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4}, {3, 7, 6, 2}, {0, 4, 7, 3}, {1, 2, 6, 5}};
    for (const auto& q : quads) {
        for (const auto& t : {std::array{q[0], q[1], q[2]}, std::array{q[0], q[2], q[3]}}) {
            Face f;
            f.v = inward ? std::array<std::uint32_t, 3>{base + t[2], base + t[1], base + t[0]}
                         : std::array<std::uint32_t, 3>{base + t[0], base + t[1], base + t[2]};
            f.material = material;
            mesh.faces.push_back(f);
        }
    }
}

inline Material flat_material(std::string name, double r, double g, double b) {
    Material m;
    m.name = std::move(name);
    m.diffuse = {r, g, b};
    return m;
}

/// 12 outward red faces followed by 12 coincident inward blue faces.
inline Mesh doubled_cube() {
    Mesh mesh;
    mesh.materials = {flat_material("red", 1, 0, 0), flat_material("blue", 0, 0, 1)};
    add_cube(mesh, 0.0, 1.0, false, 0);
    add_cube(mesh, 0.0, 1.0, true, 1, true);
    return mesh;
}

/// Red cube [-1,1]^3 enclosing a green cube [-0.5,0.5]^3.
inline Mesh nested_cubes() {
    Mesh mesh;
    mesh.materials = {flat_material("red", 1, 0, 0), flat_material("green", 0, 1, 0)};
    add_cube(mesh, -1.0, 1.0, false, 0);
    add_cube(mesh, -0.5, 0.5, false, 1);
    return mesh;
}

/// Independent ray/triangle test: plane hit, then same-side edge tests.
/// Returns the hit distance or a negative value.
inline double oracle_hit(const Vec3& o, const Vec3& d, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 n = cross(b - a, c - a);
    const double denom = dot(n, d);
    if (denom == 0.0) return -1.0;
    const double t = dot(n, a - o) / denom;
    const Vec3 p = o + d * t;
    const double s0 = dot(n, cross(b - a, p - a));
    const double s1 = dot(n, cross(c - b, p - b));
    const double s2 = dot(n, cross(a - c, p - c));
    if (s0 < 0.0 || s1 < 0.0 || s2 < 0.0) return -1.0;
    return t;
}

/// Brute-force occlusion over every triangle.
inline bool oracle_occluded(std::span<const Triangle> tris, const Vec3& o, const Vec3& d, double t_max,
                            std::uint32_t ignore_face, double eps) {
    for (const auto& t : tris) {
        if (t.face_index == ignore_face) continue;
        const double hit = oracle_hit(o, d, t.a, t.b, t.c);
        if (hit > eps && hit < t_max) return true;
    }
    return false;
}

inline Vec3 random_unit(std::mt19937_64& gen) {
    std::normal_distribution<double> n(0.0, 1.0);
    for (;;) {
        const Vec3 v{n(gen), n(gen), n(gen)};
        const double len = norm(v);
        if (len > 1e-9) return v * (1.0 / len);
    }
}

/// Independent voxel merge: per-point grid coordinate from the documented
/// formula, then std::map accumulation.
inline PointCloud oracle_voxelize(const PointCloud& cloud, int r) {
    double lo[3] = {INFINITY, INFINITY, INFINITY};
    double hi[3] = {-INFINITY, -INFINITY, -INFINITY};
    for (const auto& p : cloud.points) {
        for (int k = 0; k < 3; ++k) {
            lo[k] = std::min(lo[k], p[k]);
            hi[k] = std::max(hi[k], p[k]);
        }
    }
    double max_extent = 0.0;
    for (int k = 0; k < 3; ++k) max_extent = std::max(max_extent, hi[k] - lo[k]);
    const double s = max_extent > 0 ? (r - 1) / max_extent : 1.0;
    std::map<std::array<long, 3>, std::array<long, 4>> acc;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        std::array<long, 3> key{};
        for (int k = 0; k < 3; ++k) {
            const double extent = hi[k] - lo[k];
            double shift = max_extent > 0 ? ((r - 1) - extent * s) / 2 : (r - 1) / 2.0;
            if (max_extent > 0 && extent == max_extent) shift = 0.0;
            const double g = (cloud.points[i][k] - lo[k]) * s + shift;
            key[k] = std::lround(std::floor(g + 0.5));
            key[k] = std::max(0L, std::min<long>(r - 1, key[k]));
        }
        auto& a = acc[key];
        a[0] += cloud.colors[i].r;
        a[1] += cloud.colors[i].g;
        a[2] += cloud.colors[i].b;
        a[3] += 1;
    }
    PointCloud out;
    out.grid_resolution = r;
    for (const auto& [key, a] : acc) {
        out.points.push_back({double(key[0]), double(key[1]), double(key[2])});
        const auto avg = [&](long sum) {
            return static_cast<std::uint8_t>(std::floor(static_cast<double>(sum) / a[3] + 0.5));
        };
        out.colors.push_back({avg(a[0]), avg(a[1]), avg(a[2])});
    }
    return out;
}

// Brute-force quality: every (direction, sample point) pair checked against
// every triangle, reusing only the direction set and sample-point rule.
inline std::vector<double> oracle_quality(const Mesh& mesh, const AoConfig& cfg) {
    const auto tris = mesh_triangles(mesh);
    Aabb box;
    for (const auto& t : tris) {
        box.expand(t.a);
        box.expand(t.b);
        box.expand(t.c);
    }
    const double eps = 1e-4 * box.diagonal();
    const auto dirs = generate_directions(cfg.n_directions);
    const Philox4x32 rng(cfg.seed);
    std::vector<double> q(mesh.faces.size(), 0.0);
    for (std::size_t f = 0; f < tris.size(); ++f) {
        const auto& t = tris[f];
        const Vec3 n = normalized(cross(t.b - t.a, t.c - t.a));
        int visible = 0;
        for (int s = 0; s < cfg.samples_per_face; ++s) {
            Vec3 p = (t.a + t.b + t.c) * (1.0 / 3.0);
            if (s > 0) {
                const auto bits = rng(rng_counter(f, static_cast<std::uint32_t>(s), RngStream::kAoSamples));
                const double r1 = unit_from_u32(bits[0]);
                const double r2 = unit_from_u32(bits[1]);
                p = t.a * (1 - std::sqrt(r1)) + t.b * (std::sqrt(r1) * (1 - r2)) + t.c * (std::sqrt(r1) * r2);
            }
            for (const auto& d : dirs) {
                if (dot(n, d) <= 0) continue;
                if (!oracle_occluded(tris, p + n * eps, d, INFINITY, static_cast<std::uint32_t>(f), eps)) ++visible;
            }
        }
        q[f] = static_cast<double>(visible) / (cfg.n_directions * cfg.samples_per_face);
    }
    return q;
}

}  // namespace testing_support
