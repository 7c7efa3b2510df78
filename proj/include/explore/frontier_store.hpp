#pragma once

#include "explore/geometry.hpp"
#include "explore/occupancy_octree.hpp"
#include "explore/voxel_key.hpp"

#include <unordered_map>
#include <vector>

namespace explore {

struct FrontierCorrection {
  size_t n_erased_known = 0;
  size_t n_erased_near = 0;
};

/// Hash-keyed set of candidate frontier voxels. Keys are the set identity;
/// the stored point is the voxel center. Maintenance is a single pass over
/// the entries, independent of how many map cells changed.
class FrontierStore {
 public:
  explicit FrontierStore(double clear_radius_m = 1.0)
      : clear_radius_(clear_radius_m) {}

  double clearRadius() const { return clear_radius_; }
  void setClearRadius(double r) { clear_radius_ = r; }

  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool contains(const VoxelKey& k) const { return entries_.count(k) > 0; }

  /// Insert the voxel one resolution step behind `ray_end` (as seen from
  /// `ray_origin`) if that voxel is unknown in the map. Returns whether a
  /// new entry appeared.
  bool insertCandidate(const OccupancyOctree& map, const Vec3& ray_origin,
                       const Vec3& ray_end);

  /// Validation pass: erases entries whose voxel has become known and
  /// entries within the clear radius of the robot. Touches each entry
  /// exactly once.
  FrontierCorrection correct(const OccupancyOctree& map,
                             const Vec3& robot_pos);

  /// All frontier centers, sorted by Morton code of the key.
  std::vector<Vec3> snapshot() const;

  /// Direct insertion of a known-good entry; benchmark support.
  void seed(const VoxelKey& key, const Vec3& center) {
    entries_.emplace(key, center);
  }

  void reserve(size_t n) { entries_.reserve(n); }
  void clear() { entries_.clear(); }

  const std::unordered_map<VoxelKey, Vec3, VoxelKeyHash>& entries() const {
    return entries_;
  }

 private:
  std::unordered_map<VoxelKey, Vec3, VoxelKeyHash> entries_;
  double clear_radius_;
};

}  // namespace explore
