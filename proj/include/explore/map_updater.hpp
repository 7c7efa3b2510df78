#pragma once

#include "explore/exec.hpp"
#include "explore/frontier_store.hpp"
#include "explore/geometry.hpp"
#include "explore/occupancy_octree.hpp"
#include "explore/sensor_model.hpp"

#include <cstdint>
#include <vector>

namespace explore {

/// One sensing cycle's worth of measurements, as handed over by the
/// simulator (stand-in for the SLAM submap). `points` are first-return hit
/// points; `free_endpoints` are the truncation points of rays that measured
/// no return within the scan range, carried so the inverse model can carve
/// the observed-empty space they crossed.
struct ScanInput {
  std::vector<Vec3> points;
  std::vector<Vec3> free_endpoints;
  SensorPose origin;
};

struct UpdateReport {
  double entropy_before = 0.0;  // bits
  double entropy_after = 0.0;   // bits
  double info_gain = 0.0;       // bits, == entropy_before - entropy_after
  size_t n_hits = 0;
  size_t n_misses = 0;
  size_t n_frontiers_added = 0;
  size_t n_frontiers_removed = 0;
  int64_t t_map_us = 0;       // inverse insertion + entropy bookkeeping
  int64_t t_frontier_us = 0;  // forward sweep + frontier maintenance
  int64_t t_total_us = 0;
};

/// Binary entropy summed over all voxels of `box` (clipped to the map).
/// Unknown voxels contribute exactly 1 bit.
double entropyInBox(const OccupancyOctree& map, const Aabb& box,
                    ExecMode mode = ExecMode::Serial);

/// Read-only cast phase of the forward sweep: probes every model ray from
/// `pose` against the current map. Safe to parallelize; the map is not
/// mutated.
std::vector<RayProbe> castSweepBundle(const OccupancyOctree& map,
                                      const SensorModel& model,
                                      const SensorPose& pose,
                                      ExecMode mode = ExecMode::Serial);

/// Forward-sensor-model pass: for every model ray, walk the known-free
/// corridor from the pose. Rays that meet an occupied voxel contribute
/// nothing. Rays that end in unknown space or at the range limit have their
/// corridor re-marked free (miss updates) and a frontier candidate inserted
/// one voxel past the corridor end. Returns (free updates, frontier inserts).
std::pair<size_t, size_t> updateFreeSpace(OccupancyOctree& map,
                                          FrontierStore& frontiers,
                                          const SensorModel& model,
                                          const SensorPose& pose,
                                          ExecMode mode = ExecMode::Serial);

/// Full map update for one scan: entropy before, inverse-model insertion of
/// every measurement, forward free-space/frontier pass, entropy after, and
/// the frontier correction pass.
UpdateReport processScan(OccupancyOctree& map, FrontierStore& frontiers,
                         const SensorModel& model, const ScanInput& scan,
                         ExecMode mode = ExecMode::Serial);

/// Bounding box used for the entropy bookkeeping of `scan`: the axis-aligned
/// bounds of the scan points expanded by one resolution; a sensor-range cube
/// around the pose when the scan has no points.
Aabb entropyBoxFor(const OccupancyOctree& map, const SensorModel& model,
                   const ScanInput& scan);

}  // namespace explore
