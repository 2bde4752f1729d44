#pragma once

#include <cstdint>
#include <vector>

#include "meshsampler/geometry.hpp"
#include "meshsampler/mesh_io.hpp"

namespace meshsampler {

struct AoConfig {
    int n_directions = 256;
    int samples_per_face = 4;
    std::uint64_t seed = 1;
};

/// Per-face visibility in [0,1]: the fraction of (direction, sample point)
/// pairs for which the face is front-facing and unoccluded.
struct FaceQuality {
    std::vector<double> values;
};

/// Spherical Fibonacci lattice of n unit directions covering the full sphere.
std::vector<Vec3> generate_directions(int n);

/// `threads` <= 1 runs inline; the result does not depend on it.
FaceQuality compute_face_quality(const Mesh& mesh, const Bvh& bvh, const AoConfig& cfg, int threads = 1);

}  // namespace meshsampler
