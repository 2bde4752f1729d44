#include <algorithm>
#include <cmath>

#include "meshsampler/errors.hpp"
#include "meshsampler/geometry.hpp"

namespace meshsampler {
namespace {

// Relative cross-product magnitude below which a triangle counts as flat.
constexpr double kDegenerateTolerance = 1e-12;

Vec3 centroid(const Triangle& t) { return (t.a + t.b + t.c) * (1.0 / 3.0); }

Aabb triangle_box(const Triangle& t) {
    Aabb box;
    box.expand(t.a);
    box.expand(t.b);
    box.expand(t.c);
    return box;
}

bool ray_hits_box(const Ray& ray, const Aabb& box, double t_max) {
    double t0 = 0.0;
    double t1 = t_max;
    for (int axis = 0; axis < 3; ++axis) {
        const double o = ray.origin[axis];
        const double d = ray.direction[axis];
        if (d == 0.0) {
            if (o < box.lo[axis] || o > box.hi[axis]) return false;
            continue;
        }
        const double inv = 1.0 / d;
        double near = (box.lo[axis] - o) * inv;
        double far = (box.hi[axis] - o) * inv;
        if (near > far) std::swap(near, far);
        t0 = std::max(t0, near);
        t1 = std::min(t1, far);
        if (t0 > t1) return false;
    }
    return true;
}

}  // namespace

double face_area(const Triangle& t) { return 0.5 * norm(cross(t.b - t.a, t.c - t.a)); }

bool is_degenerate(const Triangle& t) {
    const Vec3 e1 = t.b - t.a;
    const Vec3 e2 = t.c - t.a;
    const double n = norm(cross(e1, e2));
    return !(n > kDegenerateTolerance * norm(e1) * norm(e2)) || !std::isfinite(n);
}

Vec3 face_normal(const Triangle& t) {
    if (is_degenerate(t)) throw DegenerateGeometryError("face normal of a degenerate triangle");
    return normalized(cross(t.b - t.a, t.c - t.a));
}

std::vector<Triangle> mesh_triangles(const Mesh& mesh) {
    std::vector<Triangle> out;
    out.reserve(mesh.faces.size());
    for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
        const auto& f = mesh.faces[i];
        out.push_back({mesh.vertices[f.v[0]], mesh.vertices[f.v[1]], mesh.vertices[f.v[2]],
                       static_cast<std::uint32_t>(i)});
    }
    return out;
}

bool is_degenerate_face(const Mesh& mesh, std::size_t face) {
    const auto& v = mesh.faces[face].v;
    if (v[0] == v[1] || v[1] == v[2] || v[0] == v[2]) return true;
    return is_degenerate({mesh.vertices[v[0]], mesh.vertices[v[1]], mesh.vertices[v[2]], 0});
}

double intersect(const Ray& ray, const Triangle& t) {
    // Möller–Trumbore.
    const Vec3 e1 = t.b - t.a;
    const Vec3 e2 = t.c - t.a;
    const Vec3 p = cross(ray.direction, e2);
    const double det = dot(e1, p);
    if (det == 0.0 || !std::isfinite(det)) return -1.0;
    const double inv_det = 1.0 / det;
    const Vec3 s = ray.origin - t.a;
    const double u = dot(s, p) * inv_det;
    if (u < 0.0 || u > 1.0) return -1.0;
    const Vec3 q = cross(s, e1);
    const double v = dot(ray.direction, q) * inv_det;
    if (v < 0.0 || u + v > 1.0) return -1.0;
    return dot(e2, q) * inv_det;
}

Bvh::Bvh(std::vector<Triangle> triangles) : triangles_(std::move(triangles)) {
    if (triangles_.empty()) return;
    Aabb scene;
    for (const auto& t : triangles_) scene.expand(triangle_box(t));
    epsilon_ = kSelfHitEpsilonScale * scene.diagonal();
    nodes_.reserve(2 * triangles_.size() / kMaxLeafSize + 1);
    build(0, static_cast<std::uint32_t>(triangles_.size()));
}

std::uint32_t Bvh::build(std::uint32_t begin, std::uint32_t end) {
    const auto index = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();
    Aabb box;
    Aabb centroids;
    for (auto i = begin; i < end; ++i) {
        box.expand(triangle_box(triangles_[i]));
        centroids.expand(centroid(triangles_[i]));
    }
    // Pad so that rounding in the slab test never rejects a box a
    // triangle test would hit.
    const double pad = 1e-9 * std::max(box.diagonal(), 1e-300);
    box.lo -= Vec3{pad, pad, pad};
    box.hi += Vec3{pad, pad, pad};
    nodes_[index].box = box;

    if (end - begin <= kMaxLeafSize) {
        nodes_[index].first = begin;
        nodes_[index].count = end - begin;
        return index;
    }
    const int axis = centroids.longest_axis();
    const auto mid = begin + (end - begin) / 2;
    std::nth_element(triangles_.begin() + begin, triangles_.begin() + mid, triangles_.begin() + end,
                     [axis](const Triangle& l, const Triangle& r) {
                         const double cl = centroid(l)[axis];
                         const double cr = centroid(r)[axis];
                         return cl < cr || (cl == cr && l.face_index < r.face_index);
                     });
    build(begin, mid);
    const auto right = build(mid, end);
    nodes_[index].first = right;
    return index;
}

bool Bvh::occluded(const Ray& ray, std::uint32_t ignore_face) const {
    if (nodes_.empty()) return false;
    std::uint32_t stack[64];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const Node& node = nodes_[stack[--top]];
        if (!ray_hits_box(ray, node.box, ray.t_max)) continue;
        if (node.count > 0) {
            for (auto i = node.first; i < node.first + node.count; ++i) {
                const Triangle& t = triangles_[i];
                if (t.face_index == ignore_face) continue;
                const double hit = intersect(ray, t);
                if (hit > epsilon_ && hit < ray.t_max) return true;
            }
        } else {
            const auto self = static_cast<std::uint32_t>(&node - nodes_.data());
            stack[top++] = node.first;
            stack[top++] = self + 1;
        }
    }
    return false;
}

Bvh build_bvh(std::vector<Triangle> triangles) { return Bvh(std::move(triangles)); }

}  // namespace meshsampler
