#pragma once

#include "meshsampler/mesh_io.hpp"
#include "meshsampler/vec.hpp"

namespace meshsampler {

/// Aspect-preserving map of a cloud's bounding box into [0, R-1]^3:
/// grid = (p - offset) * scale + shift. The longest axis spans the full
/// cube and the shorter axes are centered in it.
struct GridTransform {
    double scale = 1.0;  // grid units per model unit
    Vec3 offset;         // bounding-box minimum, model units
    Vec3 shift;          // centering shift, grid units
    int resolution = 0;

    Vec3 apply(const Vec3& p) const { return (p - offset) * scale + shift; }
};

/// Requires a non-empty cloud and resolution >= 2. A cloud whose points all
/// coincide maps to the cube center.
GridTransform compute_transform(const PointCloud& cloud, int resolution);

/// Quantizes to the grid (round half up, clamped), merges points that share
/// a cell by averaging their colors (round half up) and returns the cells
/// in lexicographic (x, y, z) order.
PointCloud voxelize(const PointCloud& cloud, int resolution);

}  // namespace meshsampler
