#include "explore/nav_planner.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_map>

namespace explore {

Vec3 Path::pointAt(double s) const {
  if (waypoints.empty()) return Vec3::Zero();
  if (s <= 0.0) return waypoints.front();
  double remaining = s;
  for (size_t i = 0; i + 1 < waypoints.size(); ++i) {
    const Vec3 seg = waypoints[i + 1] - waypoints[i];
    const double len = seg.norm();
    if (remaining <= len) {
      return waypoints[i] + seg * (len > 0.0 ? remaining / len : 0.0);
    }
    remaining -= len;
  }
  return waypoints.back();
}

namespace {

// Neighbor offsets within the inflation radius, precomputed per call from
// the radius/resolution ratio.
std::vector<VoxelKey> inflationOffsets(double radius, double resolution) {
  std::vector<VoxelKey> offsets;
  if (radius <= 0.0) return offsets;
  const int32_t reach = static_cast<int32_t>(std::floor(radius / resolution));
  const double r2 = (radius / resolution) * (radius / resolution);
  for (int32_t dx = -reach; dx <= reach; ++dx) {
    for (int32_t dy = -reach; dy <= reach; ++dy) {
      for (int32_t dz = -reach; dz <= reach; ++dz) {
        if (dx == 0 && dy == 0 && dz == 0) continue;
        const double d2 = double(dx) * dx + double(dy) * dy + double(dz) * dz;
        if (d2 <= r2 + 1e-12) offsets.push_back({dx, dy, dz});
      }
    }
  }
  return offsets;
}

struct TraversabilityCheck {
  const OccupancyOctree& map;
  const PlanRequest& req;
  std::vector<VoxelKey> offsets;

  explicit TraversabilityCheck(const OccupancyOctree& m, const PlanRequest& r)
      : map(m), req(r),
        offsets(inflationOffsets(r.inflation_radius, m.resolution())) {}

  bool operator()(const VoxelKey& key) const {
    if (!map.inBounds(key)) return false;
    if (map.centerOf(key).z() > req.max_z) return false;
    const OccupancyState s = map.stateOf(key);
    if (s == OccupancyState::Occupied) return false;
    if (s == OccupancyState::Unknown && !req.allow_unknown) return false;
    for (const VoxelKey& d : offsets) {
      const VoxelKey n{key.x + d.x, key.y + d.y, key.z + d.z};
      if (map.inBounds(n) && map.stateOf(n) == OccupancyState::Occupied) {
        return false;
      }
    }
    return true;
  }
};

struct OpenEntry {
  double f;
  double g;
  uint64_t morton;
  VoxelKey key;
};

struct OpenOrder {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.g != b.g) return a.g > b.g;
    return a.morton > b.morton;
  }
};

}  // namespace

bool isTraversable(const OccupancyOctree& map, const VoxelKey& key,
                   const PlanRequest& req) {
  return TraversabilityCheck(map, req)(key);
}

PlanResult plan(const OccupancyOctree& map, const PlanRequest& req) {
  PlanResult result;
  const auto start_key = map.tryKeyAt(req.start);
  if (!start_key) {
    result.status = PlanStatus::StartUntraversable;
    return result;
  }
  TraversabilityCheck traversable(map, req);
  if (!traversable(*start_key)) {
    result.status = PlanStatus::StartUntraversable;
    return result;
  }

  // Snap an untraversable goal to the nearest traversable voxel within 2 m.
  auto goal_key = map.tryKeyAt(req.goal);
  if (!goal_key || !traversable(*goal_key)) {
    const Vec3 goal_probe =
        req.goal.cwiseMax(map.bounds().min).cwiseMin(map.bounds().max);
    const KeyRange r = map.rangeForBox(Aabb::cube(goal_probe, 2.0));
    double best_d2 = std::numeric_limits<double>::infinity();
    std::optional<VoxelKey> best;
    for (int32_t x = r.lo.x; x <= r.hi.x; ++x) {
      for (int32_t y = r.lo.y; y <= r.hi.y; ++y) {
        for (int32_t z = r.lo.z; z <= r.hi.z; ++z) {
          const VoxelKey k{x, y, z};
          if (!traversable(k)) continue;
          const double d2 = (map.centerOf(k) - req.goal).squaredNorm();
          if (d2 < best_d2 - 1e-12 ||
              (std::abs(d2 - best_d2) <= 1e-12 && best &&
               mortonCode(k) < mortonCode(*best))) {
            best_d2 = d2;
            best = k;
          }
        }
      }
    }
    if (!best || best_d2 > 4.0 + 1e-9) {
      result.status = PlanStatus::NoPath;
      return result;
    }
    goal_key = best;
  }

  const double res = map.resolution();
  const Vec3 goal_center = map.centerOf(*goal_key);
  auto heuristic = [&](const VoxelKey& k) {
    return (map.centerOf(k) - goal_center).norm();
  };

  std::unordered_map<VoxelKey, double, VoxelKeyHash> g_cost;
  std::unordered_map<VoxelKey, VoxelKey, VoxelKeyHash> came_from;
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;

  g_cost[*start_key] = 0.0;
  open.push({heuristic(*start_key), 0.0, mortonCode(*start_key), *start_key});

  bool found = false;
  while (!open.empty()) {
    const OpenEntry cur = open.top();
    open.pop();
    auto it = g_cost.find(cur.key);
    if (it == g_cost.end() || cur.g > it->second + 1e-12) continue;  // stale
    if (cur.key == *goal_key) {
      found = true;
      break;
    }
    for (int32_t dx = -1; dx <= 1; ++dx) {
      for (int32_t dy = -1; dy <= 1; ++dy) {
        for (int32_t dz = -1; dz <= 1; ++dz) {
          if (dx == 0 && dy == 0 && dz == 0) continue;
          const VoxelKey n{cur.key.x + dx, cur.key.y + dy, cur.key.z + dz};
          if (!traversable(n)) continue;
          const double edge =
              res * std::sqrt(double(dx * dx + dy * dy + dz * dz));
          const double g_new = cur.g + edge;
          auto gi = g_cost.find(n);
          if (gi == g_cost.end() || g_new < gi->second - 1e-12) {
            g_cost[n] = g_new;
            came_from[n] = cur.key;
            open.push({g_new + heuristic(n), g_new, mortonCode(n), n});
          }
        }
      }
    }
  }

  if (!found) {
    result.status = PlanStatus::NoPath;
    return result;
  }

  std::vector<VoxelKey> chain;
  for (VoxelKey k = *goal_key;; k = came_from.at(k)) {
    chain.push_back(k);
    if (k == *start_key) break;
  }
  std::reverse(chain.begin(), chain.end());

  Path path;
  path.waypoints.reserve(chain.size());
  for (const VoxelKey& k : chain) path.waypoints.push_back(map.centerOf(k));
  for (size_t i = 0; i + 1 < path.waypoints.size(); ++i) {
    path.length += (path.waypoints[i + 1] - path.waypoints[i]).norm();
  }

  // Audit the returned waypoints against the inflation constraint; the
  // search guarantees this, the count catches regressions.
  for (const VoxelKey& k : chain) {
    if (!traversable(k)) ++result.inflation_violations;
  }

  result.status = PlanStatus::Found;
  result.path = std::move(path);
  return result;
}

}  // namespace explore
