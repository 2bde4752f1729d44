#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "meshsampler/mesh_io.hpp"
#include "meshsampler/vec.hpp"

namespace meshsampler {

struct Triangle {
    Vec3 a;
    Vec3 b;
    Vec3 c;
    std::uint32_t face_index = 0;
};

struct Ray {
    Vec3 origin;
    Vec3 direction;  // unit length
    double t_max = std::numeric_limits<double>::infinity();
};

/// Unit normal by the right-hand rule over (b-a, c-a).
/// Throws DegenerateGeometryError for zero-area triangles.
Vec3 face_normal(const Triangle& t);

double face_area(const Triangle& t);

/// True when the triangle has (numerically) zero area.
bool is_degenerate(const Triangle& t);

/// One triangle per mesh face, in face order.
std::vector<Triangle> mesh_triangles(const Mesh& mesh);

/// A face is degenerate if it repeats a vertex index or has zero area.
bool is_degenerate_face(const Mesh& mesh, std::size_t face);

/// Ray/triangle intersection distance, or a negative value on a miss.
/// Two-sided, no epsilon on t.
double intersect(const Ray& ray, const Triangle& t);

/// Bounding volume hierarchy over a triangle list, median split on the
/// longest centroid axis, at most `kMaxLeafSize` triangles per leaf.
class Bvh {
public:
    static constexpr std::size_t kMaxLeafSize = 4;

    struct Node {
        Aabb box;
        std::uint32_t first = 0;  // leaf: first triangle; inner: right child
        std::uint32_t count = 0;  // 0 for inner nodes; left child is the next node
    };

    Bvh() = default;
    explicit Bvh(std::vector<Triangle> triangles);

    bool empty() const { return triangles_.empty(); }
    std::span<const Node> nodes() const { return nodes_; }
    std::span<const Triangle> triangles() const { return triangles_; }

    /// Self-hit tolerance on the hit parameter: 1e-4 of the scene diagonal.
    double epsilon() const { return epsilon_; }

    /// True iff some triangle whose face_index != ignore_face is hit with
    /// t in (epsilon, t_max).
    bool occluded(const Ray& ray, std::uint32_t ignore_face) const;

private:
    std::uint32_t build(std::uint32_t begin, std::uint32_t end);

    std::vector<Triangle> triangles_;
    std::vector<Node> nodes_;
    double epsilon_ = 0.0;
};

Bvh build_bvh(std::vector<Triangle> triangles);

inline bool occluded(const Bvh& bvh, const Ray& ray, std::uint32_t ignore_face) {
    return bvh.occluded(ray, ignore_face);
}

/// Relative self-hit tolerance applied to the scene bounding-box diagonal.
inline constexpr double kSelfHitEpsilonScale = 1e-4;

}  // namespace meshsampler
