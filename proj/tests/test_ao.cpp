#include <numbers>

#include "doctest.h"
#include "meshsampler/ao.hpp"
#include "support.hpp"

using namespace meshsampler;
using namespace testing_support;

namespace {

FaceQuality quality_of(const Mesh& mesh, const AoConfig& cfg, int threads = 1) {
    return compute_face_quality(mesh, build_bvh(mesh_triangles(mesh)), cfg, threads);
}

}  // namespace

TEST_SUITE("ao.directions") {
    TEST_CASE("one direction is a unit vector") {
        const auto d = generate_directions(1);
        REQUIRE(d.size() == 1);
        CHECK(norm(d[0]) == doctest::Approx(1.0).epsilon(1e-12));
    }

    TEST_CASE("256 directions: unit length, balanced, well separated") {
        const auto dirs = generate_directions(256);
        REQUIRE(dirs.size() == 256);
        Vec3 sum;
        for (const auto& d : dirs) {
            CHECK(std::abs(norm(d) - 1.0) < 1e-9);
            sum += d;
        }
        CHECK(norm(sum * (1.0 / 256)) < 0.05);
        double min_angle = std::numbers::pi;
        for (std::size_t i = 0; i < dirs.size(); ++i) {
            for (std::size_t j = i + 1; j < dirs.size(); ++j) {
                min_angle = std::min(min_angle, std::acos(std::clamp(dot(dirs[i], dirs[j]), -1.0, 1.0)));
            }
        }
        CHECK(min_angle * 180.0 / std::numbers::pi > 5.0);
    }

    TEST_CASE("zero directions is rejected") { CHECK_THROWS_AS(generate_directions(0), std::invalid_argument); }
}

TEST_SUITE("ao.quality") {
    TEST_CASE("isolated triangle sees half the sphere") {
        Mesh m;
        m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
        m.faces = {Face{{0, 1, 2}}};
        const AoConfig cfg{256, 1, 9};
        const auto q = quality_of(m, cfg);
        // Lattice oracle: fraction of directions with positive z.
        int upper = 0;
        for (const auto& d : generate_directions(256)) upper += d.z > 0;
        CHECK(q.values[0] == doctest::Approx(upper / 256.0));
        CHECK(std::abs(q.values[0] - 0.5) <= 0.05);
    }

    TEST_CASE("doubled cube: inward twins are invisible, outward faces are not") {
        const Mesh m = doubled_cube();
        const AoConfig cfg{256, 4, 3};
        const auto q = quality_of(m, cfg);
        const auto oracle = oracle_quality(m, cfg);
        for (std::size_t f = 0; f < 24; ++f) {
            CHECK(q.values[f] == oracle[f]);
            if (f < 12) CHECK(q.values[f] > 0.2);
            else CHECK(q.values[f] == 0.0);
        }
    }

    TEST_CASE("nested cubes: the inner cube is invisible") {
        const Mesh m = nested_cubes();
        const AoConfig cfg{128, 4, 5};
        const auto q = quality_of(m, cfg);
        const auto oracle = oracle_quality(m, cfg);
        for (std::size_t f = 0; f < 24; ++f) {
            CHECK(q.values[f] == oracle[f]);
            if (f < 12) CHECK(q.values[f] > 0.2);
            else CHECK(q.values[f] == 0.0);
        }
    }

    TEST_CASE("removing other geometry never lowers quality") {
        const Mesh nested = nested_cubes();
        const AoConfig cfg{128, 3, 1};
        const auto together = quality_of(nested, cfg);
        Mesh inner;
        inner.materials = nested.materials;
        add_cube(inner, -0.5, 0.5, false, 1);
        Mesh outer;
        outer.materials = nested.materials;
        add_cube(outer, -1.0, 1.0, false, 0);
        const auto inner_alone = quality_of(inner, cfg);
        const auto outer_alone = quality_of(outer, cfg);
        for (std::size_t f = 0; f < 12; ++f) {
            CHECK(outer_alone.values[f] >= together.values[f]);
            CHECK(inner_alone.values[f] >= together.values[12 + f]);
        }
    }

    TEST_CASE("opposite twins cannot both face the same direction") {
        Mesh m;
        m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
        m.faces = {Face{{0, 1, 2}}, Face{{2, 1, 0}}};
        const auto q = quality_of(m, {256, 4, 2});
        for (double v : q.values) CHECK((v >= 0.0 && v <= 1.0));
        CHECK(q.values[0] + q.values[1] <= 1.0);
    }

    TEST_CASE("degenerate faces get zero quality") {
        Mesh m;
        m.vertices = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {0, 1, 0}};
        m.faces = {Face{{0, 1, 2}}, Face{{0, 0, 3}}, Face{{0, 1, 3}}};
        const auto q = quality_of(m, {64, 2, 2});
        CHECK(q.values[0] == 0.0);
        CHECK(q.values[1] == 0.0);
        CHECK(q.values[2] > 0.0);
    }

    TEST_CASE("result does not depend on thread count") {
        Mesh m = nested_cubes();
        add_cube(m, 2.0, 2.5);
        const AoConfig cfg{64, 4, 77};
        const auto one = quality_of(m, cfg, 1);
        const auto many = quality_of(m, cfg, 4);
        CHECK(one.values == many.values);
    }
}
