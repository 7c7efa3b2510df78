#pragma once

#include "explore/exec.hpp"
#include "explore/geometry.hpp"
#include "explore/grid_walk.hpp"
#include "explore/map_updater.hpp"
#include "explore/nav_planner.hpp"
#include "explore/occupancy_octree.hpp"
#include "explore/sensor_model.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace explore {

enum class WorldKind { Forest, Warehouse, Room };

struct BoxPrimitive {
  Vec3 center;
  Vec3 half_extents;
};

struct CylinderPrimitive {
  double cx = 0.0, cy = 0.0;
  double radius = 0.0;
  double z0 = 0.0, z1 = 0.0;
};

/// Ground-truth environment: analytic primitives rasterized onto a boolean
/// voxel grid (a voxel is occupied iff its center lies inside a primitive).
/// Immutable after construction.
class WorldModel {
 public:
  WorldModel(const Aabb& bounds, std::vector<BoxPrimitive> boxes,
             std::vector<CylinderPrimitive> cylinders, double resolution);

  const Aabb& bounds() const { return bounds_; }
  double resolution() const { return frame_.resolution; }
  const GridFrame& frame() const { return frame_; }
  const std::vector<BoxPrimitive>& boxes() const { return boxes_; }
  const std::vector<CylinderPrimitive>& cylinders() const {
    return cylinders_;
  }

  bool occupied(const VoxelKey& k) const {
    return raster_[index(k)] != 0;
  }
  bool occupiedAt(const Vec3& p) const;
  bool analyticOccupied(const Vec3& p) const;

  const std::vector<uint8_t>& raster() const { return raster_; }

  /// Voxels counted toward coverage: everything except occupied voxels with
  /// no in-bounds free face neighbor (solid interiors can never be seen).
  int64_t observableCount() const { return n_observable_; }
  bool observable(const VoxelKey& k) const {
    return observable_[index(k)] != 0;
  }

 private:
  size_t index(const VoxelKey& k) const {
    return (static_cast<size_t>(k.x) * frame_.ny + k.y) * frame_.nz + k.z;
  }

  Aabb bounds_;
  GridFrame frame_;
  std::vector<BoxPrimitive> boxes_;
  std::vector<CylinderPrimitive> cylinders_;
  std::vector<uint8_t> raster_;
  std::vector<uint8_t> observable_;
  int64_t n_observable_ = 0;
};

/// Deterministic environment generator.
///   Forest:    Poisson-count cylinders at 0.05 trees/m^2, radius
///              U(0.15, 0.4), full height, minimum spacing, cleared spawn.
///   Warehouse: perimeter walls plus a grid of storage racks with aisles.
///   Room:      perimeter walls only, empty interior.
WorldModel generateWorld(WorldKind kind, double extent_m, uint64_t seed,
                         double resolution = 0.4, double height_m = 4.0);

/// World file I/O. One primitive per line:
///   bounds x0 y0 z0 x1 y1 z1
///   box cx cy cz hx hy hz
///   cyl cx cy r z0 z1
void saveWorld(const WorldModel& world, std::ostream& os);
WorldModel loadWorld(std::istream& is, double resolution);
WorldModel loadWorldFile(const std::string& path, double resolution);

/// Simulated range scan: exact grid traversal of every model ray against
/// the raster. Rays that enter an occupied voxel within range emit a hit
/// point just inside that voxel; rays with no return record their
/// truncation point (range limit or world edge) as a free endpoint.
/// Optional Gaussian range noise perturbs hit distances (reproducible via
/// noise_seed); noise voids the exactness guarantees and is off by default.
ScanInput simulateScan(const WorldModel& world, const SensorModel& model,
                       const SensorPose& pose,
                       ExecMode mode = ExecMode::Serial,
                       double noise_sigma = 0.0, uint64_t noise_seed = 0);

struct RobotState {
  Vec3 position{0, 0, 0};
  double v_max = 1.0;    // m/s
  double tick_dt = 0.1;  // s
};

/// Advance the robot along the path polyline by v_max * tick_dt, clamped to
/// the path end. `progress_m` is the arc length already covered and is
/// updated in place.
RobotState stepRobot(const RobotState& state, const Path& path,
                     double& progress_m);

/// Fraction of observable ground-truth voxels currently known in the map.
double coverage(const WorldModel& world, const OccupancyOctree& map);

}  // namespace explore
