#pragma once

#include "explore/geometry.hpp"
#include "explore/occupancy_octree.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace explore {

struct PlanRequest {
  Vec3 start{0, 0, 0};
  Vec3 goal{0, 0, 0};
  double inflation_radius = 0.6;
  bool allow_unknown = false;
  double max_z = std::numeric_limits<double>::infinity();  // altitude cap
};

struct Path {
  std::vector<Vec3> waypoints;  // consecutive 26-neighbor voxel centers
  double length = 0.0;

  /// Point at arc length s along the polyline, clamped to the ends.
  Vec3 pointAt(double s) const;
};

enum class PlanStatus { Found, NoPath, StartUntraversable };

struct PlanResult {
  PlanStatus status = PlanStatus::NoPath;
  std::optional<Path> path;
  size_t inflation_violations = 0;  // post-hoc audit of returned waypoints

  bool ok() const { return status == PlanStatus::Found; }
};

/// Whether a voxel can be flown through: free (or unknown when allowed),
/// under the altitude cap, and no occupied voxel center within the
/// inflation radius of its center.
bool isTraversable(const OccupancyOctree& map, const VoxelKey& key,
                   const PlanRequest& req);

/// Shortest 26-connected path under Euclidean edge costs between voxel
/// centers. The goal is snapped to the nearest traversable voxel within 2 m
/// when it is not itself traversable. An untraversable start is an error
/// distinct from unreachability.
PlanResult plan(const OccupancyOctree& map, const PlanRequest& req);

}  // namespace explore
