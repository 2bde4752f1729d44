#include <functional>
#include <random>

#include "doctest.h"
#include "meshsampler/errors.hpp"
#include "meshsampler/geometry.hpp"
#include "support.hpp"

using namespace meshsampler;
using namespace testing_support;

namespace {

std::vector<Triangle> random_soup(std::mt19937_64& gen, std::size_t n, double size) {
    std::uniform_real_distribution<double> pos(-1.0, 1.0);
    std::uniform_real_distribution<double> off(-size, size);
    std::vector<Triangle> tris;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 c{pos(gen), pos(gen), pos(gen)};
        tris.push_back({c + Vec3{off(gen), off(gen), off(gen)}, c + Vec3{off(gen), off(gen), off(gen)},
                        c + Vec3{off(gen), off(gen), off(gen)}, static_cast<std::uint32_t>(i)});
    }
    return tris;
}

// Every triangle sits in exactly one leaf and every box contains its subtree.
void check_structure(const Bvh& bvh, std::size_t n) {
    std::vector<int> seen(n, 0);
    const auto nodes = bvh.nodes();
    std::function<Aabb(std::uint32_t)> walk = [&](std::uint32_t i) -> Aabb {
        const auto& node = nodes[i];
        Aabb content;
        if (node.count > 0) {
            CHECK(node.count <= Bvh::kMaxLeafSize);
            for (auto k = node.first; k < node.first + node.count; ++k) {
                const auto& t = bvh.triangles()[k];
                ++seen[t.face_index];
                content.expand(t.a);
                content.expand(t.b);
                content.expand(t.c);
            }
        } else {
            content.expand(walk(i + 1));
            content.expand(walk(node.first));
        }
        for (int a = 0; a < 3; ++a) {
            CHECK(node.box.lo[a] <= content.lo[a]);
            CHECK(node.box.hi[a] >= content.hi[a]);
        }
        return content;
    };
    if (!nodes.empty()) walk(0);
    for (auto s : seen) CHECK(s == 1);
}

}  // namespace

TEST_CASE("face_normal follows the right-hand rule") {
    const Triangle t{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, 0};
    CHECK(face_normal(t) == Vec3{0, 0, 1});
    const Triangle flipped{{0, 0, 0}, {0, 1, 0}, {1, 0, 0}, 0};
    CHECK(face_normal(flipped) == Vec3{0, 0, -1});
    CHECK_THROWS_AS(face_normal({{0, 0, 0}, {1, 1, 1}, {2, 2, 2}, 0}), DegenerateGeometryError);
}

TEST_CASE("face_normal is orthogonal to both edges") {
    std::mt19937_64 gen(3);
    for (const auto& t : random_soup(gen, 500, 0.5)) {
        if (is_degenerate(t)) continue;
        const Vec3 n = face_normal(t);
        CHECK(std::abs(norm(n) - 1.0) < 1e-12);
        CHECK(std::abs(dot(n, normalized(t.b - t.a))) < 1e-6);
        CHECK(std::abs(dot(n, normalized(t.c - t.a))) < 1e-6);
    }
}

TEST_CASE("face_area") {
    CHECK(face_area({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, 0}) == 0.5);
    CHECK(face_area({{0, 0, 0}, {1, 1, 1}, {3, 3, 3}, 0}) == 0.0);
    const Triangle t{{0.1, 0.2, 0.3}, {1.4, -0.2, 0.5}, {0.3, 0.9, -1.1}, 0};
    const double s = 3.5;
    const Triangle scaled{t.a * s, t.b * s, t.c * s, 0};
    CHECK(face_area(scaled) == doctest::Approx(face_area(t) * s * s).epsilon(1e-12));
}

TEST_CASE("degenerate faces: repeated index or zero area") {
    Mesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {2, 0, 0}};
    m.faces = {Face{{0, 1, 2}}, Face{{0, 0, 2}}, Face{{0, 1, 3}}};
    CHECK_FALSE(is_degenerate_face(m, 0));
    CHECK(is_degenerate_face(m, 1));
    CHECK(is_degenerate_face(m, 2));
}

TEST_CASE("empty bvh never occludes") {
    const Bvh bvh = build_bvh({});
    CHECK(bvh.empty());
    CHECK_FALSE(occluded(bvh, {{0, 0, 0}, {0, 0, 1}}, 0));
}

TEST_CASE("single triangle is a single leaf") {
    const Bvh bvh = build_bvh({{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, 0}});
    REQUIRE(bvh.nodes().size() == 1);
    CHECK(bvh.nodes()[0].count == 1);
}

TEST_CASE("bvh structure over 10^4 triangles and agreement with brute force on 10^3 rays") {
    std::mt19937_64 gen(17);
    const auto tris = random_soup(gen, 10000, 0.05);
    const Bvh bvh = build_bvh(tris);
    check_structure(bvh, tris.size());
    std::uniform_real_distribution<double> pos(-1.5, 1.5);
    int hits = 0;
    for (int i = 0; i < 1000; ++i) {
        const Ray r{{pos(gen), pos(gen), pos(gen)}, random_unit(gen)};
        const bool expected = oracle_occluded(tris, r.origin, r.direction, r.t_max, 0xffffffffu, bvh.epsilon());
        CHECK(occluded(bvh, r, 0xffffffffu) == expected);
        hits += expected;
    }
    CHECK(hits > 100);
}

TEST_CASE("construction is deterministic") {
    std::mt19937_64 gen(5);
    const auto tris = random_soup(gen, 2000, 0.1);
    const Bvh a = build_bvh(tris);
    const Bvh b = build_bvh(tris);
    REQUIRE(a.nodes().size() == b.nodes().size());
    for (std::size_t i = 0; i < a.triangles().size(); ++i) {
        CHECK(a.triangles()[i].face_index == b.triangles()[i].face_index);
    }
}

TEST_CASE("occlusion on cube fixtures") {
    SUBCASE("ray from a face centroid outward on an isolated cube") {
        Mesh m;
        add_cube(m, 0, 1);
        const Bvh bvh = build_bvh(mesh_triangles(m));
        // Face 2 is on the +z side; start just outside it.
        const Vec3 c{0.5, 0.5, 1.0 + bvh.epsilon()};
        CHECK_FALSE(occluded(bvh, {c, {0, 0, 1}}, 2));
        CHECK_FALSE(occluded(bvh, {c, normalized({1, 1, 1})}, 2));
    }
    SUBCASE("ray from the inner box toward the enclosing box") {
        const Mesh m = nested_cubes();
        const auto tris = mesh_triangles(m);
        const Bvh bvh = build_bvh(tris);
        // Inner +z face is face 12 + 2.
        const Vec3 c{0.1, 0.1, 0.5 + bvh.epsilon()};
        const Vec3 d = normalized({0.3, -0.2, 1.0});
        CHECK(occluded(bvh, {c, d}, 14));
        CHECK(oracle_occluded(tris, c, d, INFINITY, 14, bvh.epsilon()));
    }
    SUBCASE("ignore_face excludes the only hit") {
        const std::vector<Triangle> tris{{{-1, -1, 1}, {1, -1, 1}, {0, 1, 1}, 7}};
        const Bvh bvh = build_bvh(tris);
        const Ray r{{0, 0, 0}, {0, 0, 1}};
        CHECK(occluded(bvh, r, 3));
        CHECK_FALSE(occluded(bvh, r, 7));
    }
    SUBCASE("t_max and epsilon bound the hit interval") {
        const std::vector<Triangle> tris{{{-1, -1, 1}, {1, -1, 1}, {0, 1, 1}, 0}};
        const Bvh bvh = build_bvh(tris);
        CHECK_FALSE(occluded(bvh, {{0, 0, 0}, {0, 0, 1}, 0.5}, 9));
        CHECK_FALSE(occluded(bvh, {{0, 0, 1}, {0, 0, 1}}, 9));
        CHECK_FALSE(occluded(bvh, {{0, 0, 0}, {0, 0, -1}}, 9));
    }
}
