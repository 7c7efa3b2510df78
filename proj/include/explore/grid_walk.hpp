#pragma once

#include "explore/geometry.hpp"
#include "explore/voxel_key.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace explore {

/// A finite voxel grid anchored at `min` with cubic cells of edge
/// `resolution`. Cells are half-open; a point exactly on a boundary belongs
/// to the cell with the larger index. Both the occupancy map and the
/// ground-truth raster use this frame, so ray stepping is bit-identical
/// between them.
struct GridFrame {
  Vec3 min{0, 0, 0};
  double resolution = 1.0;
  int32_t nx = 0, ny = 0, nz = 0;

  int32_t dim(int axis) const { return axis == 0 ? nx : (axis == 1 ? ny : nz); }

  bool inBounds(const VoxelKey& k) const {
    return k.x >= 0 && k.x < nx && k.y >= 0 && k.y < ny && k.z >= 0 &&
           k.z < nz;
  }

  std::optional<VoxelKey> tryKeyAt(const Vec3& p) const {
    VoxelKey k;
    int32_t* idx[3] = {&k.x, &k.y, &k.z};
    for (int i = 0; i < 3; ++i) {
      const double rel = (p[i] - min[i]) / resolution;
      int32_t v = static_cast<int32_t>(std::floor(rel));
      const int32_t n = dim(i);
      if (v == n && p[i] <= min[i] + n * resolution) v = n - 1;  // top face
      if (v < 0 || v >= n) return std::nullopt;
      *idx[i] = v;
    }
    return k;
  }

  Vec3 centerOf(const VoxelKey& k) const {
    return min + Vec3((k.x + 0.5) * resolution, (k.y + 0.5) * resolution,
                      (k.z + 0.5) * resolution);
  }

  /// Distance along the ray at which it leaves voxel `k`.
  double voxelExitT(const VoxelKey& k, const Vec3& origin,
                    const Vec3& dir) const {
    double t_exit = std::numeric_limits<double>::infinity();
    const int32_t idx[3] = {k.x, k.y, k.z};
    for (int i = 0; i < 3; ++i) {
      if (std::abs(dir[i]) < 1e-15) continue;
      const double face = dir[i] > 0 ? (idx[i] + 1) : idx[i];
      const double t = (min[i] + face * resolution - origin[i]) / dir[i];
      t_exit = std::min(t_exit, t);
    }
    return t_exit;
  }
};

namespace detail {

constexpr double kWalkTieEps = 1e-9;  // meters along the ray

/// How a grid walk terminated: the visitor stopped it, the next voxel would
/// start beyond max_t, or the walk stepped off the grid.
enum class WalkEnd { VisitorStop, RangeEnd, GridExit };

/// Amanatides-Woo stepping from the voxel containing `origin` along `dir`
/// (unit or not; t is measured in units of |dir| = 1, i.e. meters for a unit
/// vector). The visitor receives each voxel and its entry distance (0 for
/// the first) and returns false to stop. Boundary crossings closer together
/// than the tie epsilon advance both axes at once, so the walk steps
/// diagonally through cell corners instead of visiting zero-chord cells.
template <typename Visitor>
WalkEnd walkGrid(const GridFrame& frame, const Vec3& origin, const Vec3& dir,
                 double max_t, Visitor&& visit) {
  const auto start = frame.tryKeyAt(origin);
  if (!start) return WalkEnd::GridExit;
  int32_t k[3] = {start->x, start->y, start->z};

  int step[3];
  double t_max[3], t_delta[3];
  for (int i = 0; i < 3; ++i) {
    const double d = dir[i];
    if (d > 1e-15) {
      step[i] = 1;
      const double bound = frame.min[i] + (k[i] + 1) * frame.resolution;
      t_max[i] = (bound - origin[i]) / d;
      t_delta[i] = frame.resolution / d;
    } else if (d < -1e-15) {
      step[i] = -1;
      const double bound = frame.min[i] + k[i] * frame.resolution;
      t_max[i] = (bound - origin[i]) / d;
      t_delta[i] = frame.resolution / -d;
    } else {
      step[i] = 0;
      t_max[i] = std::numeric_limits<double>::infinity();
      t_delta[i] = std::numeric_limits<double>::infinity();
    }
  }

  double t = 0.0;
  const int64_t max_steps =
      int64_t(frame.nx) + frame.ny + frame.nz + 3;
  for (int64_t s = 0; s <= max_steps; ++s) {
    if (!visit(VoxelKey{k[0], k[1], k[2]}, t)) return WalkEnd::VisitorStop;
    const double m = std::min({t_max[0], t_max[1], t_max[2]});
    if (m > max_t + kWalkTieEps) return WalkEnd::RangeEnd;
    for (int i = 0; i < 3; ++i) {
      if (t_max[i] <= m + kWalkTieEps) {
        k[i] += step[i];
        if (k[i] < 0 || k[i] >= frame.dim(i)) return WalkEnd::GridExit;
        t_max[i] += t_delta[i];
      }
    }
    t = m;
  }
  return WalkEnd::RangeEnd;
}

}  // namespace detail
}  // namespace explore
