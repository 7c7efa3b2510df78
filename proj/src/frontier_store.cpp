#include "explore/frontier_store.hpp"

#include "explore/sensor_model.hpp"

#include <algorithm>

namespace explore {

bool FrontierStore::insertCandidate(const OccupancyOctree& map,
                                    const Vec3& ray_origin,
                                    const Vec3& ray_end) {
  const Vec3 behind = pointBehind(ray_origin, ray_end, map.resolution());
  const auto key = map.tryKeyAt(behind);
  if (!key) return false;                    // behind the map edge
  if (map.search(*key) != nullptr) return false;  // already known
  return entries_.emplace(*key, map.centerOf(*key)).second;
}

FrontierCorrection FrontierStore::correct(const OccupancyOctree& map,
                                          const Vec3& robot_pos) {
  FrontierCorrection result;
  const double r2 = clear_radius_ * clear_radius_;
  for (auto it = entries_.begin(); it != entries_.end();) {
    if (map.search(it->first) != nullptr) {
      it = entries_.erase(it);
      ++result.n_erased_known;
      continue;
    }
    if ((it->second - robot_pos).squaredNorm() <= r2) {
      it = entries_.erase(it);
      ++result.n_erased_near;
      continue;
    }
    ++it;
  }
  return result;
}

std::vector<Vec3> FrontierStore::snapshot() const {
  std::vector<std::pair<uint64_t, Vec3>> rows;
  rows.reserve(entries_.size());
  for (const auto& [key, center] : entries_) {
    rows.emplace_back(mortonCode(key), center);
  }
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Vec3> points;
  points.reserve(rows.size());
  for (const auto& [code, center] : rows) points.push_back(center);
  return points;
}

}  // namespace explore
