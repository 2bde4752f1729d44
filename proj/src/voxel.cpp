#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "meshsampler/errors.hpp"
#include "meshsampler/voxel.hpp"

namespace meshsampler {
namespace {

struct Cell {
    std::array<std::int32_t, 3> ijk;
    std::uint32_t point;
};

std::uint8_t mean_half_up(std::uint64_t sum, std::uint64_t count) {
    // floor(sum / count + 1/2) in exact integer arithmetic.
    return static_cast<std::uint8_t>((2 * sum + count) / (2 * count));
}

}  // namespace

GridTransform compute_transform(const PointCloud& cloud, int resolution) {
    if (cloud.points.empty()) throw EmptyInputError("cannot fit a grid to an empty cloud");
    if (resolution < 2) throw std::invalid_argument("grid resolution must be >= 2");
    Aabb box;
    for (const auto& p : cloud.points) box.expand(p);
    const Vec3 extent = box.extent();
    const double max_extent = std::max({extent.x, extent.y, extent.z});
    const double span = resolution - 1;

    GridTransform t;
    t.resolution = resolution;
    t.offset = box.lo;
    if (max_extent > 0.0) {
        t.scale = span / max_extent;
        for (int axis = 0; axis < 3; ++axis) {
            // The longest axis lands exactly on [0, R-1].
            t.shift[axis] = extent[axis] == max_extent ? 0.0 : (span - extent[axis] * t.scale) / 2.0;
        }
    } else {
        t.scale = 1.0;
        t.shift = {span / 2.0, span / 2.0, span / 2.0};
    }
    return t;
}

PointCloud voxelize(const PointCloud& cloud, int resolution) {
    if (cloud.points.empty()) throw EmptyInputError("cannot voxelize an empty cloud");
    if (cloud.colors.size() != cloud.points.size()) throw std::invalid_argument("point/color count mismatch");
    const GridTransform t = compute_transform(cloud, resolution);

    std::vector<Cell> cells(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Vec3 g = t.apply(cloud.points[i]);
        for (int axis = 0; axis < 3; ++axis) {
            const double q = std::floor(g[axis] + 0.5);
            cells[i].ijk[axis] = static_cast<std::int32_t>(std::clamp(q, 0.0, double(resolution - 1)));
        }
        cells[i].point = static_cast<std::uint32_t>(i);
    }
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
        return a.ijk < b.ijk || (a.ijk == b.ijk && a.point < b.point);
    });

    PointCloud out;
    out.grid_resolution = resolution;
    for (std::size_t i = 0; i < cells.size();) {
        std::size_t j = i;
        std::uint64_t r = 0, g = 0, b = 0;
        for (; j < cells.size() && cells[j].ijk == cells[i].ijk; ++j) {
            const Rgb8 c = cloud.colors[cells[j].point];
            r += c.r;
            g += c.g;
            b += c.b;
        }
        const std::uint64_t n = j - i;
        out.points.push_back({double(cells[i].ijk[0]), double(cells[i].ijk[1]), double(cells[i].ijk[2])});
        out.colors.push_back({mean_half_up(r, n), mean_half_up(g, n), mean_half_up(b, n)});
        i = j;
    }
    return out;
}

}  // namespace meshsampler
