#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "meshsampler/pipeline.hpp"

namespace meshsampler {
namespace {

namespace fs = std::filesystem;

// Cube corners in the order used by kCubeQuads.
std::array<Vec3, 8> cube_corners(double lo, double hi) {
    return {{{lo, lo, lo}, {hi, lo, lo}, {hi, hi, lo}, {lo, hi, lo},
             {lo, lo, hi}, {hi, lo, hi}, {hi, hi, hi}, {lo, hi, hi}}};
}

// Zero-based corner indices, counter-clockwise seen from outside.
constexpr std::array<std::array<int, 4>, 6> kCubeQuads{{
    {0, 3, 2, 1},  // -z
    {4, 5, 6, 7},  // +z
    {0, 1, 5, 4},  // -y
    {3, 7, 6, 2},  // +y
    {0, 4, 7, 3},  // -x
    {1, 2, 6, 5},  // +x
}};

void write_vertices(std::ostream& obj, const std::array<Vec3, 8>& corners) {
    for (const auto& p : corners) obj << "v " << p.x << ' ' << p.y << ' ' << p.z << '\n';
}

// Emits the 12 cube triangles; `base` is the 1-based index of corner 0.
void write_cube_faces(std::ostream& obj, int base, bool inward) {
    for (const auto& q : kCubeQuads) {
        for (const auto& tri : {std::array{q[0], q[1], q[2]}, std::array{q[0], q[2], q[3]}}) {
            if (inward) obj << "f " << base + tri[2] << ' ' << base + tri[1] << ' ' << base + tri[0] << '\n';
            else obj << "f " << base + tri[0] << ' ' << base + tri[1] << ' ' << base + tri[2] << '\n';
        }
    }
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    out.close();
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

std::optional<FixtureKind> parse_fixture_kind(std::string_view name) {
    if (name == "doubled_cube") return FixtureKind::kDoubledCube;
    if (name == "nested_cubes") return FixtureKind::kNestedCubes;
    if (name == "textured_quad") return FixtureKind::kTexturedQuad;
    return std::nullopt;
}

std::string_view fixture_name(FixtureKind kind) {
    switch (kind) {
        case FixtureKind::kDoubledCube: return "doubled_cube";
        case FixtureKind::kNestedCubes: return "nested_cubes";
        case FixtureKind::kTexturedQuad: return "textured_quad";
    }
    return "";
}

fs::path generate_fixture(FixtureKind kind, const fs::path& dir) {
    fs::create_directories(dir);
    const std::string name(fixture_name(kind));
    std::ostringstream obj;
    std::ostringstream mtl;
    obj << "mtllib " << name << ".mtl\n";

    switch (kind) {
        case FixtureKind::kDoubledCube:
            // Unit cube whose every outward red face has a coincident inward blue twin.
            mtl << "newmtl red\nKd 1 0 0\n\nnewmtl blue\nKd 0 0 1\n";
            write_vertices(obj, cube_corners(0.0, 1.0));
            obj << "usemtl red\n";
            write_cube_faces(obj, 1, false);
            obj << "usemtl blue\n";
            write_cube_faces(obj, 1, true);
            break;
        case FixtureKind::kNestedCubes:
            // Red cube of side 2 enclosing a green cube of side 1.
            mtl << "newmtl red\nKd 1 0 0\n\nnewmtl green\nKd 0 1 0\n";
            write_vertices(obj, cube_corners(-1.0, 1.0));
            write_vertices(obj, cube_corners(-0.5, 0.5));
            obj << "usemtl red\n";
            write_cube_faces(obj, 1, false);
            obj << "usemtl green\n";
            write_cube_faces(obj, 9, false);
            break;
        case FixtureKind::kTexturedQuad: {
            // Unit square in z = 0 with a 2x2 black/white checker.
            mtl << "newmtl checker\nKd 1 1 1\nmap_Kd " << name << ".png\n";
            obj << "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\n";
            obj << "vt 0 0\nvt 1 0\nvt 1 1\nvt 0 1\n";
            obj << "usemtl checker\nf 1/1 2/2 3/3\nf 1/1 3/3 4/4\n";
            TextureImage checker{2, 2, {0, 0, 0, 255, 255, 255, 255, 255, 255, 0, 0, 0}};
            write_png(checker, dir / (name + ".png"));
            break;
        }
    }
    write_text(dir / (name + ".mtl"), mtl.str());
    const fs::path obj_path = dir / (name + ".obj");
    write_text(obj_path, obj.str());
    return obj_path;
}

}  // namespace meshsampler
