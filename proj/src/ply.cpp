#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "meshsampler/errors.hpp"
#include "meshsampler/mesh_io.hpp"

static_assert(std::endian::native == std::endian::little, "binary PLY I/O assumes a little-endian host");

namespace meshsampler {
namespace {

constexpr std::size_t kBinaryRecordBytes = 3 * sizeof(float) + 3;

enum class ScalarType { kInt8, kUint8, kInt16, kUint16, kInt32, kUint32, kFloat32, kFloat64 };

std::optional<ScalarType> scalar_type(std::string_view name) {
    if (name == "char" || name == "int8") return ScalarType::kInt8;
    if (name == "uchar" || name == "uint8") return ScalarType::kUint8;
    if (name == "short" || name == "int16") return ScalarType::kInt16;
    if (name == "ushort" || name == "uint16") return ScalarType::kUint16;
    if (name == "int" || name == "int32") return ScalarType::kInt32;
    if (name == "uint" || name == "uint32") return ScalarType::kUint32;
    if (name == "float" || name == "float32") return ScalarType::kFloat32;
    if (name == "double" || name == "float64") return ScalarType::kFloat64;
    return std::nullopt;
}

std::size_t scalar_size(ScalarType t) {
    switch (t) {
        case ScalarType::kInt8:
        case ScalarType::kUint8: return 1;
        case ScalarType::kInt16:
        case ScalarType::kUint16: return 2;
        case ScalarType::kInt32:
        case ScalarType::kUint32:
        case ScalarType::kFloat32: return 4;
        case ScalarType::kFloat64: return 8;
    }
    return 0;
}

template <typename T>
T load_le(const char* p) {
    T v;
    std::memcpy(&v, p, sizeof(T));
    return v;
}

double decode_scalar(ScalarType t, const char* p) {
    switch (t) {
        case ScalarType::kInt8: return load_le<std::int8_t>(p);
        case ScalarType::kUint8: return load_le<std::uint8_t>(p);
        case ScalarType::kInt16: return load_le<std::int16_t>(p);
        case ScalarType::kUint16: return load_le<std::uint16_t>(p);
        case ScalarType::kInt32: return load_le<std::int32_t>(p);
        case ScalarType::kUint32: return load_le<std::uint32_t>(p);
        case ScalarType::kFloat32: return load_le<float>(p);
        case ScalarType::kFloat64: return load_le<double>(p);
    }
    return 0.0;
}

struct Property {
    std::string name;
    ScalarType type;
};

struct Header {
    PlyEncoding encoding = PlyEncoding::kAscii;
    std::size_t vertex_count = 0;
    std::vector<Property> properties;
    std::optional<int> grid_resolution;
};

std::vector<std::string> split(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    for (std::string tok; ss >> tok;) out.push_back(tok);
    return out;
}

Header read_header(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || (line != "ply" && line != "ply\r")) throw ParseError("missing 'ply' magic");
    Header h;
    bool have_format = false;
    bool in_vertex = false;
    bool seen_vertex = false;
    for (std::size_t line_no = 2;; ++line_no) {
        if (!std::getline(in, line)) throw ParseError("header not terminated by end_header");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto tok = split(line);
        if (tok.empty()) continue;
        if (tok[0] == "end_header") break;
        if (tok[0] == "comment" || tok[0] == "obj_info") {
            if (tok.size() == 3 && tok[1] == "grid_resolution") {
                int r = 0;
                const auto [p, ec] = std::from_chars(tok[2].data(), tok[2].data() + tok[2].size(), r);
                if (ec == std::errc{} && r > 0) h.grid_resolution = r;
            }
        } else if (tok[0] == "format") {
            if (tok.size() != 3) throw ParseError("malformed format line", line_no);
            if (tok[1] == "ascii") h.encoding = PlyEncoding::kAscii;
            else if (tok[1] == "binary_little_endian") h.encoding = PlyEncoding::kBinaryLittleEndian;
            else throw ParseError("unsupported encoding '" + tok[1] + "'", line_no);
            have_format = true;
        } else if (tok[0] == "element") {
            if (tok.size() != 3) throw ParseError("malformed element line", line_no);
            in_vertex = tok[1] == "vertex";
            if (in_vertex) {
                if (seen_vertex) throw ParseError("duplicate vertex element", line_no);
                seen_vertex = true;
                std::size_t n = 0;
                const auto [p, ec] = std::from_chars(tok[2].data(), tok[2].data() + tok[2].size(), n);
                if (ec != std::errc{} || p != tok[2].data() + tok[2].size()) {
                    throw ParseError("malformed vertex count", line_no);
                }
                h.vertex_count = n;
            } else if (!seen_vertex && tok[2] != "0") {
                throw ParseError("elements before 'vertex' are not supported", line_no);
            }
        } else if (tok[0] == "property") {
            if (!in_vertex) continue;
            if (tok.size() != 3) throw ParseError("list properties on vertices are not supported", line_no);
            const auto type = scalar_type(tok[1]);
            if (!type) throw ParseError("unknown property type '" + tok[1] + "'", line_no);
            h.properties.push_back({tok[2], *type});
        } else {
            throw ParseError("unexpected header keyword '" + tok[0] + "'", line_no);
        }
    }
    if (!have_format) throw ParseError("missing format line");
    for (const char* required : {"x", "y", "z"}) {
        bool found = false;
        for (const auto& p : h.properties) found = found || p.name == required;
        if (!found) throw ParseError(std::string("missing vertex property '") + required + "'");
    }
    return h;
}

// Maps property slot -> destination: 0..2 position, 3..5 color, -1 ignored.
std::vector<int> property_roles(const Header& h) {
    std::vector<int> roles;
    for (const auto& p : h.properties) {
        int role = -1;
        if (p.name == "x") role = 0;
        else if (p.name == "y") role = 1;
        else if (p.name == "z") role = 2;
        else if (p.name == "red") role = 3;
        else if (p.name == "green") role = 4;
        else if (p.name == "blue") role = 5;
        roles.push_back(role);
    }
    return roles;
}

void assign(PointCloud& cloud, std::size_t i, int role, double value) {
    if (role < 0) return;
    if (role < 3) {
        cloud.points[i][role] = value;
        return;
    }
    const auto c = static_cast<std::uint8_t>(std::clamp(value, 0.0, 255.0));
    if (role == 3) cloud.colors[i].r = c;
    else if (role == 4) cloud.colors[i].g = c;
    else cloud.colors[i].b = c;
}

void append_float(std::string& out, float v) {
    char buf[32];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
    out.append(buf, p);
}

}  // namespace

void write_ply(const PointCloud& cloud, PlyEncoding encoding, std::ostream& sink) {
    std::string header = "ply\nformat ";
    header += encoding == PlyEncoding::kAscii ? "ascii" : "binary_little_endian";
    header += " 1.0\n";
    if (cloud.grid_resolution) header += "comment grid_resolution " + std::to_string(*cloud.grid_resolution) + "\n";
    header += "element vertex " + std::to_string(cloud.size()) + "\n";
    header +=
        "property float x\nproperty float y\nproperty float z\n"
        "property uchar red\nproperty uchar green\nproperty uchar blue\nend_header\n";
    sink << header;

    std::string body;
    if (encoding == PlyEncoding::kAscii) {
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            const auto& p = cloud.points[i];
            const auto& c = cloud.colors[i];
            append_float(body, static_cast<float>(p.x));
            body += ' ';
            append_float(body, static_cast<float>(p.y));
            body += ' ';
            append_float(body, static_cast<float>(p.z));
            body += ' ' + std::to_string(c.r) + ' ' + std::to_string(c.g) + ' ' + std::to_string(c.b) + '\n';
        }
    } else {
        body.resize(cloud.size() * kBinaryRecordBytes);
        char* out = body.data();
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            for (int k = 0; k < 3; ++k) {
                const float f = static_cast<float>(cloud.points[i][k]);
                std::memcpy(out, &f, sizeof(float));
                out += sizeof(float);
            }
            *out++ = static_cast<char>(cloud.colors[i].r);
            *out++ = static_cast<char>(cloud.colors[i].g);
            *out++ = static_cast<char>(cloud.colors[i].b);
        }
    }
    sink.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!sink) throw std::runtime_error("PLY write failed");
}

PointCloud read_ply(std::istream& source) {
    const Header h = read_header(source);
    const auto roles = property_roles(h);
    PointCloud cloud;
    cloud.grid_resolution = h.grid_resolution;

    if (h.encoding == PlyEncoding::kAscii) {
        std::string line;
        for (std::size_t i = 0; i < h.vertex_count; ++i) {
            do {
                if (!std::getline(source, line)) {
                    throw ParseError("body truncated: expected " + std::to_string(h.vertex_count) +
                                     " vertices, got " + std::to_string(i));
                }
            } while (line.find_first_not_of(" \t\r") == std::string::npos);
            cloud.points.emplace_back();
            cloud.colors.emplace_back();
            const auto tok = split(line);
            if (tok.size() < roles.size()) throw ParseError("short vertex record " + std::to_string(i));
            for (std::size_t k = 0; k < roles.size(); ++k) {
                const char* first = tok[k].data();
                const char* last = first + tok[k].size();
                std::from_chars_result r{};
                double v = 0.0;
                // Float properties are parsed at float precision so printed values round-trip exactly.
                if (h.properties[k].type == ScalarType::kFloat32) {
                    float f = 0.0f;
                    r = std::from_chars(first, last, f);
                    v = f;
                } else {
                    r = std::from_chars(first, last, v);
                }
                if (r.ec != std::errc{} || r.ptr != last) {
                    throw ParseError("malformed value '" + tok[k] + "' in vertex " + std::to_string(i));
                }
                assign(cloud, i, roles[k], v);
            }
        }
        return cloud;
    }

    std::size_t record = 0;
    for (const auto& p : h.properties) record += scalar_size(p.type);
    // Read in bounded chunks so a lying vertex count cannot trigger a huge allocation.
    constexpr std::size_t kChunkRecords = 1 << 16;
    std::vector<char> buf;
    for (std::size_t done = 0; done < h.vertex_count;) {
        const std::size_t n = std::min(kChunkRecords, h.vertex_count - done);
        buf.resize(n * record);
        source.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (static_cast<std::size_t>(source.gcount()) != buf.size()) {
            throw ParseError("body truncated: expected " + std::to_string(h.vertex_count) + " vertices");
        }
        const char* in = buf.data();
        for (std::size_t i = 0; i < n; ++i) {
            cloud.points.emplace_back();
            cloud.colors.emplace_back();
            for (std::size_t k = 0; k < roles.size(); ++k) {
                const auto t = h.properties[k].type;
                if (roles[k] >= 0 && roles[k] < 3 && t == ScalarType::kFloat32) {
                    cloud.points[done + i][roles[k]] = load_le<float>(in);
                } else {
                    assign(cloud, done + i, roles[k], decode_scalar(t, in));
                }
                in += scalar_size(t);
            }
        }
        done += n;
    }
    return cloud;
}

void save_ply(const PointCloud& cloud, PlyEncoding encoding, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_ply(cloud, encoding, out);
    out.close();
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

PointCloud load_ply(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    return read_ply(in);
}

}  // namespace meshsampler
