#include "explore/sensor_model.hpp"

#include <cmath>
#include <stdexcept>

namespace explore {

SensorModel::SensorModel(const SensorModelConfig& config) : config_(config) {
  if (config.max_range_m <= 0.0 || config.az_step_rad <= 0.0 ||
      config.el_step_rad <= 0.0 || config.az_span_rad < 0.0 ||
      config.el_span_rad < 0.0) {
    throw std::invalid_argument("SensorModel: invalid config");
  }
  const int n_az =
      static_cast<int>(std::floor(config.az_span_rad / config.az_step_rad)) + 1;
  const int n_el =
      static_cast<int>(std::floor(config.el_span_rad / config.el_step_rad)) + 1;
  directions_.reserve(static_cast<size_t>(n_az) * n_el);

  // Grids are centered on zero: elevations symmetric about the horizontal,
  // azimuths starting at the offset.
  const double el_lo = -0.5 * (n_el - 1) * config.el_step_rad;
  for (int ia = 0; ia < n_az; ++ia) {
    const double az = config.az_offset_rad + ia * config.az_step_rad;
    for (int ie = 0; ie < n_el; ++ie) {
      const double el = el_lo + config.el_offset_rad + ie * config.el_step_rad;
      const double ce = std::cos(el);
      directions_.emplace_back(ce * std::cos(az), ce * std::sin(az),
                               std::sin(el));
    }
  }
}

Vec3 SensorModel::rotatedDirection(size_t i, double yaw) const {
  const Vec3& d = directions_[i];
  const double c = std::cos(yaw), s = std::sin(yaw);
  return Vec3(c * d.x() - s * d.y(), s * d.x() + c * d.y(), d.z());
}

std::vector<Ray> SensorModel::raysFrom(const SensorPose& pose) const {
  std::vector<Ray> rays;
  rays.reserve(directions_.size());
  for (size_t i = 0; i < directions_.size(); ++i) {
    rays.push_back({pose.position, rotatedDirection(i, pose.yaw)});
  }
  return rays;
}

Vec3 pointBehind(const Vec3& ray_origin, const Vec3& ray_end,
                 double resolution) {
  const Vec3 diff = ray_end - ray_origin;
  const double len = diff.norm();
  if (len <= 0.0) {
    throw std::invalid_argument("pointBehind: zero-length ray");
  }
  return ray_end + diff / len * resolution;
}

}  // namespace explore
