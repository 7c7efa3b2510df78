#pragma once

#include <Eigen/Core>

#include <algorithm>

namespace explore {

using Vec3 = Eigen::Vector3d;

/// Axis-aligned box, closed on both ends.
struct Aabb {
  Vec3 min{0.0, 0.0, 0.0};
  Vec3 max{0.0, 0.0, 0.0};

  bool contains(const Vec3& p) const {
    return p.x() >= min.x() && p.x() <= max.x() && p.y() >= min.y() &&
           p.y() <= max.y() && p.z() >= min.z() && p.z() <= max.z();
  }

  bool intersects(const Aabb& other) const {
    for (int i = 0; i < 3; ++i) {
      if (other.max[i] < min[i] || other.min[i] > max[i]) return false;
    }
    return true;
  }

  Aabb clippedTo(const Aabb& limit) const {
    Aabb out;
    for (int i = 0; i < 3; ++i) {
      out.min[i] = std::max(min[i], limit.min[i]);
      out.max[i] = std::min(max[i], limit.max[i]);
    }
    return out;
  }

  Aabb expanded(double margin) const {
    return {min - Vec3::Constant(margin), max + Vec3::Constant(margin)};
  }

  Vec3 extent() const { return max - min; }
  Vec3 center() const { return 0.5 * (min + max); }

  static Aabb cube(const Vec3& center, double half_edge) {
    return {center - Vec3::Constant(half_edge), center + Vec3::Constant(half_edge)};
  }
};

}  // namespace explore
