#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "meshsampler/ao.hpp"
#include "meshsampler/mesh_io.hpp"

namespace meshsampler {

enum class DuplicateMode { kByIndex, kByPosition };

/// Canonical key of a face's spatial identity: the sorted vertex indices
/// (by_index) or the sorted quantized vertex positions (by_position).
using FaceKey = std::array<std::array<std::int64_t, 3>, 3>;

struct DuplicateGroup {
    FaceKey key;
    std::vector<std::uint32_t> members;  // ascending face indices
};

struct CullReport {
    std::size_t groups_found = 0;      // groups with >= 2 members
    std::size_t faces_removed = 0;     // non-winning duplicate-group members
    std::size_t kept_by_tie_break = 0; // groups whose best quality was shared
    std::size_t invisible_removed = 0; // remaining faces dropped for zero quality
};

struct CullOptions {
    bool remove_invisible = true;
};

/// Position quantization step relative to the mesh bounding-box diagonal.
inline constexpr double kPositionKeyScale = 1e-6;

/// Partitions every face into a group; groups are ordered by their lowest member.
std::vector<DuplicateGroup> find_duplicate_groups(const Mesh& mesh, DuplicateMode mode);

/// Keeps the highest-quality face of each group (lowest index on ties), then
/// drops zero-quality survivors when `remove_invisible` is set. Vertices,
/// UVs and materials are left untouched; survivor order is preserved.
std::pair<Mesh, CullReport> cull_internal_faces(const Mesh& mesh, const FaceQuality& quality,
                                                const std::vector<DuplicateGroup>& groups,
                                                CullOptions options = {});

}  // namespace meshsampler
