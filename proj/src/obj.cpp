#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <string_view>

#include "meshsampler/errors.hpp"
#include "meshsampler/mesh_io.hpp"

namespace meshsampler {
namespace {

constexpr std::string_view kDefaultMaterialName = "(default)";

std::vector<std::string_view> tokenize(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\v' || line[i] == '\f')) ++i;
        const std::size_t start = i;
        while (i < line.size() && !(line[i] == ' ' || line[i] == '\t' || line[i] == '\v' || line[i] == '\f')) ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

std::string_view strip_line(std::string& raw) {
    std::string_view line(raw);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.remove_suffix(1);
    return line;
}

double parse_number(std::string_view tok, std::size_t line_no) {
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(value)) {
        throw ParseError("malformed number '" + std::string(tok) + "'", line_no);
    }
    return value;
}

long long parse_index(std::string_view tok, std::size_t line_no) {
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw ParseError("malformed index '" + std::string(tok) + "'", line_no);
    }
    return value;
}

// OBJ indices are 1-based; negative values count back from the last element.
std::uint32_t resolve_index(long long raw, std::size_t count, const char* what, std::size_t line_no) {
    long long idx = -1;
    if (raw > 0) idx = raw - 1;
    else if (raw < 0) idx = static_cast<long long>(count) + raw;
    if (raw == 0 || idx < 0 || idx >= static_cast<long long>(count)) {
        throw ParseError(std::string(what) + " index " + std::to_string(raw) + " out of range", line_no);
    }
    return static_cast<std::uint32_t>(idx);
}

std::string texture_file_token(const std::vector<std::string_view>& tokens) {
    // map_Kd may carry options (-s, -o, -bm ...); the file name is last.
    std::string name(tokens.back());
    std::replace(name.begin(), name.end(), '\\', '/');
    return name;
}

void warn(Warnings* warnings, std::string msg) {
    if (warnings) warnings->push_back(std::move(msg));
}

}  // namespace

Aabb Mesh::bounds() const {
    Aabb box;
    for (const auto& v : vertices) box.expand(v);
    return box;
}

std::vector<Material> parse_mtl(std::istream& source, const std::filesystem::path& base_path, Warnings* warnings) {
    std::vector<Material> materials;
    std::map<std::string, std::shared_ptr<const TextureImage>> texture_cache;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(source, raw)) {
        ++line_no;
        const auto tokens = tokenize(strip_line(raw));
        if (tokens.empty()) continue;
        const auto key = tokens[0];
        if (key == "newmtl") {
            Material m;
            m.name = tokens.size() > 1 ? std::string(tokens[1]) : std::string();
            materials.push_back(std::move(m));
        } else if (key == "Kd" && !materials.empty()) {
            if (tokens.size() < 2) throw ParseError("Kd needs at least one value", line_no);
            // Kd r [g b]: a single value is a gray level.
            std::array<double, 3> kd{};
            for (int c = 0; c < 3; ++c) {
                const auto& tok = tokens.size() >= 4 ? tokens[1 + c] : tokens[1];
                kd[c] = std::clamp(parse_number(tok, line_no), 0.0, 1.0);
            }
            materials.back().diffuse = kd;
        } else if (key == "map_Kd" && !materials.empty()) {
            if (tokens.size() < 2) throw ParseError("map_Kd needs a file name", line_no);
            const std::string name = texture_file_token(tokens);
            const auto path = base_path / name;
            auto cached = texture_cache.find(name);
            if (cached == texture_cache.end()) {
                std::shared_ptr<const TextureImage> image;
                try {
                    image = std::make_shared<const TextureImage>(load_texture(path));
                } catch (const TextureError& e) {
                    warn(warnings, std::string("texture unavailable, using Kd: ") + e.what());
                }
                cached = texture_cache.emplace(name, std::move(image)).first;
            }
            materials.back().texture = cached->second;
        }
    }
    return materials;
}

Mesh parse_obj(std::istream& source, const std::filesystem::path& base_path, Warnings* warnings) {
    Mesh mesh;
    std::map<std::string, std::uint32_t, std::less<>> material_ids;
    std::optional<std::uint32_t> current_material;

    const auto default_material = [&]() -> std::uint32_t {
        auto it = material_ids.find(kDefaultMaterialName);
        if (it != material_ids.end()) return it->second;
        Material m;
        m.name = std::string(kDefaultMaterialName);
        mesh.materials.push_back(std::move(m));
        const auto id = static_cast<std::uint32_t>(mesh.materials.size() - 1);
        material_ids.emplace(std::string(kDefaultMaterialName), id);
        return id;
    };

    std::string raw;
    std::size_t line_no = 0;
    std::vector<std::uint32_t> poly_v;
    std::vector<std::uint32_t> poly_uv;
    while (std::getline(source, raw)) {
        ++line_no;
        const auto tokens = tokenize(strip_line(raw));
        if (tokens.empty()) continue;
        const auto key = tokens[0];
        if (key == "v") {
            if (tokens.size() < 4) throw ParseError("vertex needs 3 coordinates", line_no);
            // Trailing w or nonstandard r g b values are ignored.
            mesh.vertices.push_back({parse_number(tokens[1], line_no), parse_number(tokens[2], line_no),
                                     parse_number(tokens[3], line_no)});
        } else if (key == "vt") {
            if (tokens.size() < 2) throw ParseError("texture coordinate needs a value", line_no);
            const double u = parse_number(tokens[1], line_no);
            const double v = tokens.size() > 2 ? parse_number(tokens[2], line_no) : 0.0;
            mesh.uvs.push_back({u, v});
        } else if (key == "f") {
            if (tokens.size() < 4) throw ParseError("face needs at least 3 vertices", line_no);
            poly_v.clear();
            poly_uv.clear();
            bool all_uv = true;
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                const auto ref = tokens[i];
                const auto slash = ref.find('/');
                poly_v.push_back(resolve_index(parse_index(ref.substr(0, slash), line_no), mesh.vertices.size(),
                                               "vertex", line_no));
                std::string_view uv_tok;
                if (slash != std::string_view::npos) {
                    const auto rest = ref.substr(slash + 1);
                    uv_tok = rest.substr(0, rest.find('/'));
                }
                if (uv_tok.empty()) {
                    all_uv = false;
                } else {
                    poly_uv.push_back(
                        resolve_index(parse_index(uv_tok, line_no), mesh.uvs.size(), "texture coordinate", line_no));
                }
            }
            for (std::size_t i = 1; i + 1 < poly_v.size(); ++i) {
                Face f;
                f.v = {poly_v[0], poly_v[i], poly_v[i + 1]};
                if (all_uv) f.uv = std::array{poly_uv[0], poly_uv[i], poly_uv[i + 1]};
                f.material = current_material;
                mesh.faces.push_back(f);
            }
        } else if (key == "usemtl") {
            const std::string name = tokens.size() > 1 ? std::string(tokens[1]) : std::string();
            if (auto it = material_ids.find(name); it != material_ids.end()) {
                current_material = it->second;
            } else {
                warn(warnings, "line " + std::to_string(line_no) + ": unknown material '" + name +
                                   "', using default gray");
                current_material = default_material();
            }
        } else if (key == "mtllib") {
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                std::string name(tokens[i]);
                std::replace(name.begin(), name.end(), '\\', '/');
                const auto path = base_path / name;
                std::ifstream in(path, std::ios::binary);
                if (!in) {
                    warn(warnings, "material library not found: " + path.string());
                    continue;
                }
                for (auto& m : parse_mtl(in, path.parent_path(), warnings)) {
                    const auto id = static_cast<std::uint32_t>(mesh.materials.size());
                    material_ids.insert_or_assign(m.name, id);
                    mesh.materials.push_back(std::move(m));
                }
            }
        }
        // Everything else (vn, o, g, s, l, p, ...) is irrelevant to sampling.
    }
    if (source.bad()) throw ParseError("read failure");
    return mesh;
}

Mesh load_obj(const std::filesystem::path& path, Warnings* warnings) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("file not found");
    return parse_obj(in, path.parent_path(), warnings);
}

}  // namespace meshsampler
