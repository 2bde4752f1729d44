#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "meshsampler/cull.hpp"

namespace meshsampler {

std::vector<DuplicateGroup> find_duplicate_groups(const Mesh& mesh, DuplicateMode mode) {
    double step = 1.0;
    Vec3 origin;
    if (mode == DuplicateMode::kByPosition) {
        const Aabb box = mesh.bounds();
        const double diag = box.diagonal();
        if (diag > 0.0) step = kPositionKeyScale * diag;
        if (!box.empty()) origin = box.lo;
    }
    const auto vertex_key = [&](std::uint32_t v) -> std::array<std::int64_t, 3> {
        if (mode == DuplicateMode::kByIndex) return {static_cast<std::int64_t>(v), 0, 0};
        const Vec3 p = mesh.vertices[v] - origin;
        return {std::llround(p.x / step), std::llround(p.y / step), std::llround(p.z / step)};
    };

    std::vector<DuplicateGroup> groups;
    std::map<FaceKey, std::size_t> by_key;
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        const auto& v = mesh.faces[f].v;
        FaceKey key{vertex_key(v[0]), vertex_key(v[1]), vertex_key(v[2])};
        std::sort(key.begin(), key.end());
        const auto [it, inserted] = by_key.try_emplace(key, groups.size());
        if (inserted) groups.push_back({key, {}});
        groups[it->second].members.push_back(static_cast<std::uint32_t>(f));
    }
    return groups;
}

std::pair<Mesh, CullReport> cull_internal_faces(const Mesh& mesh, const FaceQuality& quality,
                                                const std::vector<DuplicateGroup>& groups, CullOptions options) {
    if (quality.values.size() != mesh.faces.size()) {
        throw std::invalid_argument("quality count does not match face count");
    }
    CullReport report;
    std::vector<bool> keep(mesh.faces.size(), true);
    for (const auto& group : groups) {
        if (group.members.size() < 2) continue;
        ++report.groups_found;
        std::uint32_t best = group.members.front();
        for (const auto f : group.members) {
            if (quality.values[f] > quality.values[best] ||
                (quality.values[f] == quality.values[best] && f < best)) {
                best = f;
            }
        }
        std::size_t ties = 0;
        for (const auto f : group.members) {
            if (f != best) {
                keep[f] = false;
                ++report.faces_removed;
                if (quality.values[f] == quality.values[best]) ++ties;
            }
        }
        if (ties > 0) ++report.kept_by_tie_break;
    }
    if (options.remove_invisible) {
        for (std::size_t f = 0; f < keep.size(); ++f) {
            if (keep[f] && quality.values[f] <= 0.0) {
                keep[f] = false;
                ++report.invisible_removed;
            }
        }
    }

    Mesh out;
    out.vertices = mesh.vertices;
    out.uvs = mesh.uvs;
    out.materials = mesh.materials;
    for (std::size_t f = 0; f < keep.size(); ++f) {
        if (keep[f]) out.faces.push_back(mesh.faces[f]);
    }
    return {std::move(out), report};
}

}  // namespace meshsampler
