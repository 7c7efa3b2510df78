#include "explore/nav_planner.hpp"

#include <doctest.h>

#include <queue>
#include <random>
#include <unordered_map>

using namespace explore;

namespace {

// Free corridor along x in an otherwise occupied slab world.
OccupancyOctree corridorMap() {
  OccupancyOctree map({{0, 0, 0}, {8, 4, 4}}, 0.4);
  for (int32_t x = 0; x < 20; ++x) {
    for (int32_t y = 0; y < 10; ++y) {
      for (int32_t z = 0; z < 10; ++z) {
        map.updateNode(VoxelKey{x, y, z}, false);
      }
    }
  }
  return map;
}

// Uniform-cost search over the same traversability predicate; no heuristic,
// no tie-breaking subtleties.
double dijkstraCost(const OccupancyOctree& map, const PlanRequest& req) {
  const VoxelKey start = map.keyAt(req.start);
  const VoxelKey goal = map.keyAt(req.goal);
  using Entry = std::pair<double, uint64_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::unordered_map<VoxelKey, double, VoxelKeyHash> dist;
  std::unordered_map<uint64_t, VoxelKey> by_code;
  auto push = [&](const VoxelKey& k, double d) {
    const uint64_t code = mortonCode(k);
    by_code[code] = k;
    open.push({d, code});
  };
  dist[start] = 0.0;
  push(start, 0.0);
  while (!open.empty()) {
    const auto [d, code] = open.top();
    open.pop();
    const VoxelKey k = by_code[code];
    auto it = dist.find(k);
    if (it == dist.end() || d > it->second + 1e-12) continue;
    if (k == goal) return d;
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dz = -1; dz <= 1; ++dz) {
          if (dx == 0 && dy == 0 && dz == 0) continue;
          const VoxelKey n{k.x + dx, k.y + dy, k.z + dz};
          if (!isTraversable(map, n, req)) continue;
          const double nd =
              d + map.resolution() * std::sqrt(double(dx * dx + dy * dy +
                                                      dz * dz));
          auto ni = dist.find(n);
          if (ni == dist.end() || nd < ni->second - 1e-12) {
            dist[n] = nd;
            push(n, nd);
          }
        }
      }
    }
  }
  return -1.0;
}

}  // namespace

TEST_CASE("straight corridor path has grid-exact length") {
  OccupancyOctree map = corridorMap();
  PlanRequest req;
  req.start = map.centerOf(VoxelKey{2, 5, 5});
  req.goal = map.centerOf(VoxelKey{11, 5, 5});
  req.inflation_radius = 0.0;
  const PlanResult result = plan(map, req);
  REQUIRE(result.ok());
  CHECK(result.path->length == doctest::Approx(9 * 0.4).epsilon(1e-9));
  CHECK(result.path->waypoints.size() == 10);
}

TEST_CASE("start equals goal") {
  OccupancyOctree map = corridorMap();
  PlanRequest req;
  req.start = map.centerOf(VoxelKey{3, 5, 5});
  req.goal = req.start;
  req.inflation_radius = 0.0;
  const PlanResult result = plan(map, req);
  REQUIRE(result.ok());
  CHECK(result.path->waypoints.size() == 1);
  CHECK(result.path->length == doctest::Approx(0.0));
}

TEST_CASE("sealed goal is unreachable, not an error") {
  OccupancyOctree map = corridorMap();
  // Occupied wall bisecting the corridor.
  for (int32_t y = 0; y < 10; ++y) {
    for (int32_t z = 0; z < 10; ++z) {
      for (int i = 0; i < 4; ++i) map.updateNode(VoxelKey{10, y, z}, true);
    }
  }
  PlanRequest req;
  req.start = map.centerOf(VoxelKey{2, 5, 5});
  req.goal = map.centerOf(VoxelKey{18, 5, 5});
  req.inflation_radius = 0.0;
  req.allow_unknown = false;
  const PlanResult result = plan(map, req);
  CHECK(result.status == PlanStatus::NoPath);
  CHECK(!result.path.has_value());
}

TEST_CASE("untraversable start is an error distinct from no-path") {
  OccupancyOctree map = corridorMap();
  for (int i = 0; i < 4; ++i) map.updateNode(VoxelKey{2, 5, 5}, true);
  PlanRequest req;
  req.start = map.centerOf(VoxelKey{2, 5, 5});
  req.goal = map.centerOf(VoxelKey{11, 5, 5});
  const PlanResult result = plan(map, req);
  CHECK(result.status == PlanStatus::StartUntraversable);
}

TEST_CASE("goal in unknown space snaps to a nearby traversable voxel") {
  OccupancyOctree map({{0, 0, 0}, {8, 4, 4}}, 0.4);
  for (int32_t x = 0; x < 10; ++x) {
    for (int32_t y = 3; y < 7; ++y) {
      for (int32_t z = 3; z < 7; ++z) {
        map.updateNode(VoxelKey{x, y, z}, false);
      }
    }
  }
  PlanRequest req;
  req.start = map.centerOf(VoxelKey{1, 4, 4});
  req.goal = map.centerOf(VoxelKey{11, 4, 4});  // unknown voxel
  req.inflation_radius = 0.0;
  const PlanResult result = plan(map, req);
  REQUIRE(result.ok());
  CHECK((result.path->waypoints.back() - req.goal).norm() <= 2.0);
}

TEST_CASE("path cost matches uniform-cost search on random maps") {
  std::mt19937 rng(41);
  std::uniform_int_distribution<int32_t> coord(0, 19);
  std::uniform_real_distribution<double> occupied_frac(0.1, 0.25);
  int checked = 0;
  while (checked < 15) {
    OccupancyOctree map({{0, 0, 0}, {8, 8, 8}}, 0.4);
    // Random occupancy plus full free background.
    for (int32_t x = 0; x < 20; ++x) {
      for (int32_t y = 0; y < 20; ++y) {
        for (int32_t z = 0; z < 20; ++z) {
          map.updateNode(VoxelKey{x, y, z}, false);
        }
      }
    }
    const int n_obstacles =
        static_cast<int>(occupied_frac(rng) * 20 * 20 * 20);
    for (int i = 0; i < n_obstacles; ++i) {
      const VoxelKey k{coord(rng), coord(rng), coord(rng)};
      for (int j = 0; j < 4; ++j) map.updateNode(k, true);
    }
    PlanRequest req;
    req.inflation_radius = 0.0;
    req.start = map.centerOf(VoxelKey{coord(rng), coord(rng), coord(rng)});
    req.goal = map.centerOf(VoxelKey{coord(rng), coord(rng), coord(rng)});
    if (!isTraversable(map, map.keyAt(req.start), req)) continue;
    if (!isTraversable(map, map.keyAt(req.goal), req)) continue;

    const PlanResult result = plan(map, req);
    const double oracle = dijkstraCost(map, req);
    if (oracle < 0.0) {
      CHECK(result.status == PlanStatus::NoPath);
    } else {
      REQUIRE(result.ok());
      CHECK(result.path->length == doctest::Approx(oracle).epsilon(1e-9));
    }
    ++checked;
  }
}

TEST_CASE("no waypoint violates the inflation constraint") {
  std::mt19937 rng(43);
  std::uniform_int_distribution<int32_t> coord(2, 17);
  OccupancyOctree map = corridorMap();
  for (int i = 0; i < 30; ++i) {
    const VoxelKey k{coord(rng), std::min<int32_t>(coord(rng), 9),
                     std::min<int32_t>(coord(rng), 9)};
    for (int j = 0; j < 4; ++j) map.updateNode(k, true);
  }
  PlanRequest req;
  req.inflation_radius = 0.6;
  req.start = map.centerOf(VoxelKey{1, 1, 1});
  req.goal = map.centerOf(VoxelKey{18, 8, 8});
  if (!isTraversable(map, map.keyAt(req.start), req)) return;
  const PlanResult result = plan(map, req);
  if (!result.ok()) return;
  CHECK(result.inflation_violations == 0);
  for (const Vec3& wp : result.path->waypoints) {
    // Post-hoc audit against the raw map: nothing occupied within the
    // inflation radius of any waypoint.
    const KeyRange r = map.rangeForBox(Aabb::cube(wp, req.inflation_radius));
    for (int32_t x = r.lo.x; x <= r.hi.x; ++x) {
      for (int32_t y = r.lo.y; y <= r.hi.y; ++y) {
        for (int32_t z = r.lo.z; z <= r.hi.z; ++z) {
          const VoxelKey k{x, y, z};
          if (map.stateOf(k) != OccupancyState::Occupied) continue;
          CHECK((map.centerOf(k) - wp).norm() > req.inflation_radius);
        }
      }
    }
  }
}
