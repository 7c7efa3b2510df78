#pragma once

#include "explore/exec.hpp"
#include "explore/geometry.hpp"
#include "explore/grid_walk.hpp"
#include "explore/voxel_key.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <vector>

namespace explore {

/// ln(p / (1-p)). Rejects p outside the open interval (0,1).
double logOdds(double p);

/// Inverse of logOdds: 1 / (1 + exp(-l)).
double probabilityOf(double log_odds);

/// Single-step Bayesian occupancy update evaluated directly in probability
/// space with a uniform prior. Test oracle for the additive log-odds path;
/// not used by the map itself.
double bayesUpdateReference(double p_prior, double p_meas);

enum class OccupancyState { Unknown, Free, Occupied };

/// Inverse sensor model likelihoods and clamping bounds, in probability
/// space. Log-odds equivalents are derived once at map construction.
struct OccupancyParams {
  double p_hit = 0.7;
  double p_miss = 0.4;
  double p_clamp_min = 0.12;
  double p_clamp_max = 0.971;
  double occupancy_threshold = 0.5;
};

struct LeafNode {
  double log_odds = 0.0;
};

struct RayHit {
  VoxelKey key;
  double distance = 0.0;  // entry distance into the hit voxel, meters
};

/// Outcome of a bounded forward-model walk (probeRay). The walk ends at the
/// first occupied voxel, the first unknown voxel, the range limit, or the
/// map boundary, whichever comes first.
struct RayProbe {
  enum class Stop { Occupied, Unknown, Range, Bounds };
  Stop stop = Stop::Range;
  std::optional<VoxelKey> stop_key;  // set for Occupied / Unknown stops
  double t_stop = 0.0;               // distance at which the walk ended
  Vec3 last_free_center{0, 0, 0};    // center of the last free voxel seen
  bool saw_free = false;
  int corridor_len = 0;              // number of free voxels traversed
};

struct BoxCounts {
  int64_t n_free = 0;
  int64_t n_occupied = 0;
  int64_t n_unknown = 0;

  int64_t total() const { return n_free + n_occupied + n_unknown; }
  friend bool operator==(const BoxCounts&, const BoxCounts&) = default;
};

/// Inclusive voxel index range covering a world-space box.
struct KeyRange {
  VoxelKey lo;
  VoxelKey hi;

  bool empty() const { return hi.x < lo.x || hi.y < lo.y || hi.z < lo.z; }
  int64_t count() const {
    if (empty()) return 0;
    return int64_t(hi.x - lo.x + 1) * int64_t(hi.y - lo.y + 1) *
           int64_t(hi.z - lo.z + 1);
  }
};

/// Probabilistic occupancy map over a fixed bounding box. Realized as a
/// hash map from finest-depth voxel keys to log-odds leaf nodes; a key with
/// no node is unknown. Voxel cells are half-open: a point exactly on a cell
/// boundary belongs to the cell with the larger index.
///
/// Concurrency: single writer. Read-only queries may run concurrently with
/// each other but never with updates.
class OccupancyOctree {
 public:
  OccupancyOctree(const Aabb& bounds, double resolution,
                  OccupancyParams params = {});

  double resolution() const { return resolution_; }
  const Aabb& bounds() const { return bounds_; }
  const OccupancyParams& params() const { return params_; }
  int depth() const { return depth_; }
  size_t nodeCount() const { return nodes_.size(); }

  double logOddsHit() const { return l_hit_; }
  double logOddsMiss() const { return l_miss_; }
  double logOddsMin() const { return l_min_; }
  double logOddsMax() const { return l_max_; }

  std::optional<VoxelKey> tryKeyAt(const Vec3& p) const;
  VoxelKey keyAt(const Vec3& p) const;  // throws std::out_of_range
  Vec3 centerOf(const VoxelKey& k) const;
  bool inBounds(const VoxelKey& k) const;

  /// Null means the voxel has never been observed (unknown).
  const LeafNode* search(const VoxelKey& k) const;
  const LeafNode* search(const Vec3& p) const;

  OccupancyState stateOf(const VoxelKey& k) const;
  OccupancyState stateAt(const Vec3& p) const;

  /// Additive log-odds update with clamping. Creates the node at the
  /// uniform prior if absent. Returns the resulting state.
  OccupancyState updateNode(const VoxelKey& k, bool occupied_measurement);

  /// Every voxel the segment passes through, in order. First key contains
  /// `origin`, last contains `end`, each key exactly once.
  std::vector<VoxelKey> traverseRay(const Vec3& origin, const Vec3& end) const;

  /// First occupied voxel along the ray within max_range, or nullopt.
  /// Unknown voxels are traversed without terminating the ray. `direction`
  /// must be unit length. A hit counts if its entry distance <= max_range.
  std::optional<RayHit> castRay(const Vec3& origin, const Vec3& direction,
                                double max_range) const;

  /// Bounded walk used by the forward-model sweep: stops at the first
  /// occupied or first unknown voxel instead of traversing unknown space.
  RayProbe probeRay(const Vec3& origin, const Vec3& direction,
                    double max_range) const;

  /// Free-space sweep of the inverse model: every voxel strictly before the
  /// voxel containing `hit` receives a miss update. The hit voxel itself is
  /// not touched. Returns the number of miss updates applied.
  size_t insertRay(const Vec3& origin, const Vec3& hit);

  /// Exhaustive per-voxel classification over the cube's voxels (those with
  /// centers inside the closed cube, clipped to map bounds).
  BoxCounts countStatesInBox(const Vec3& center, double half_edge,
                             ExecMode mode = ExecMode::Serial) const;

  /// Index range of voxels whose centers lie in `box`, clipped to bounds.
  KeyRange rangeForBox(const Aabb& box) const;

  /// Debug dump: one line `kx ky kz log_odds` per node, sorted by Morton
  /// code.
  void dump(std::ostream& os) const;

  const std::unordered_map<VoxelKey, LeafNode, VoxelKeyHash>& nodes() const {
    return nodes_;
  }

  void reserve(size_t n) { nodes_.reserve(n); }

  const GridFrame& frame() const { return frame_; }

 private:
  OccupancyState stateOfNode(const LeafNode* node) const;

  Aabb bounds_;
  double resolution_;
  OccupancyParams params_;
  GridFrame frame_;
  int depth_;
  double l_hit_, l_miss_, l_min_, l_max_, l_tau_;
  std::unordered_map<VoxelKey, LeafNode, VoxelKeyHash> nodes_;
};

}  // namespace explore
