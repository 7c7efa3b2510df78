#pragma once

#include "explore/geometry.hpp"

#include <vector>

namespace explore {

/// Range-limited scanning sensor approximation: a fixed bundle of unit
/// direction vectors over an azimuth/elevation grid. The bundle is
/// precomputed once; the per-update ray count is a constant of the model.
struct SensorModelConfig {
  double max_range_m = 20.0;
  double az_span_rad = 2.0 * 3.14159265358979323846;
  double el_span_rad = 0.59;
  double az_step_rad = 0.0873;  // ~5 deg
  double el_step_rad = 0.0873;
  // Phase shift of the angular grid; lets two models share spans without
  // sharing any exact direction.
  double az_offset_rad = 0.0;
  double el_offset_rad = 0.0;
};

struct SensorPose {
  Vec3 position{0, 0, 0};
  double yaw = 0.0;  // radians, [-pi, pi)
};

struct Ray {
  Vec3 origin;
  Vec3 direction;  // unit
};

class SensorModel {
 public:
  explicit SensorModel(const SensorModelConfig& config = {});

  const SensorModelConfig& config() const { return config_; }
  double maxRange() const { return config_.max_range_m; }

  /// Reference-frame directions (yaw = 0). Constant for the model lifetime.
  const std::vector<Vec3>& directions() const { return directions_; }
  size_t rayCount() const { return directions_.size(); }

  /// All directions rotated into the world frame by the pose yaw, paired
  /// with the pose position. List length is invariant across calls.
  std::vector<Ray> raysFrom(const SensorPose& pose) const;

  Vec3 rotatedDirection(size_t i, double yaw) const;

 private:
  SensorModelConfig config_;
  std::vector<Vec3> directions_;
};

/// Point one resolution step past `ray_end`, along the ray from
/// `ray_origin` through `ray_end`.
Vec3 pointBehind(const Vec3& ray_origin, const Vec3& ray_end,
                 double resolution);

}  // namespace explore
