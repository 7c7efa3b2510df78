#include "explore/sim_world.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace explore {

WorldModel::WorldModel(const Aabb& bounds, std::vector<BoxPrimitive> boxes,
                       std::vector<CylinderPrimitive> cylinders,
                       double resolution)
    : bounds_(bounds), boxes_(std::move(boxes)),
      cylinders_(std::move(cylinders)) {
  if (resolution <= 0.0) {
    throw std::invalid_argument("WorldModel: resolution must be > 0");
  }
  frame_.min = bounds.min;
  frame_.resolution = resolution;
  const Vec3 ext = bounds.extent();
  frame_.nx = std::max<int32_t>(
      1, static_cast<int32_t>(std::ceil(ext.x() / resolution - 1e-9)));
  frame_.ny = std::max<int32_t>(
      1, static_cast<int32_t>(std::ceil(ext.y() / resolution - 1e-9)));
  frame_.nz = std::max<int32_t>(
      1, static_cast<int32_t>(std::ceil(ext.z() / resolution - 1e-9)));

  const size_t total =
      static_cast<size_t>(frame_.nx) * frame_.ny * frame_.nz;
  raster_.assign(total, 0);
  for (int32_t x = 0; x < frame_.nx; ++x) {
    for (int32_t y = 0; y < frame_.ny; ++y) {
      for (int32_t z = 0; z < frame_.nz; ++z) {
        const VoxelKey k{x, y, z};
        raster_[index(k)] = analyticOccupied(frame_.centerOf(k)) ? 1 : 0;
      }
    }
  }

  observable_.assign(total, 0);
  static constexpr int32_t kFaces[6][3] = {{1, 0, 0},  {-1, 0, 0}, {0, 1, 0},
                                           {0, -1, 0}, {0, 0, 1},  {0, 0, -1}};
  for (int32_t x = 0; x < frame_.nx; ++x) {
    for (int32_t y = 0; y < frame_.ny; ++y) {
      for (int32_t z = 0; z < frame_.nz; ++z) {
        const VoxelKey k{x, y, z};
        bool obs = true;
        if (occupied(k)) {
          obs = false;
          for (const auto& f : kFaces) {
            const VoxelKey n{x + f[0], y + f[1], z + f[2]};
            if (frame_.inBounds(n) && !occupied(n)) {
              obs = true;
              break;
            }
          }
        }
        observable_[index(k)] = obs ? 1 : 0;
        if (obs) ++n_observable_;
      }
    }
  }
}

bool WorldModel::occupiedAt(const Vec3& p) const {
  const auto k = frame_.tryKeyAt(p);
  return k && occupied(*k);
}

bool WorldModel::analyticOccupied(const Vec3& p) const {
  for (const BoxPrimitive& b : boxes_) {
    const Vec3 d = (p - b.center).cwiseAbs();
    if (d.x() <= b.half_extents.x() && d.y() <= b.half_extents.y() &&
        d.z() <= b.half_extents.z()) {
      return true;
    }
  }
  for (const CylinderPrimitive& c : cylinders_) {
    if (p.z() < c.z0 || p.z() > c.z1) continue;
    const double dx = p.x() - c.cx;
    const double dy = p.y() - c.cy;
    if (dx * dx + dy * dy <= c.radius * c.radius) return true;
  }
  return false;
}

namespace {

std::vector<BoxPrimitive> perimeterWalls(double extent, double height,
                                         double thickness) {
  const double e = extent, h = height, t = thickness;
  return {
      {{t / 2, e / 2, h / 2}, {t / 2, e / 2, h / 2}},
      {{e - t / 2, e / 2, h / 2}, {t / 2, e / 2, h / 2}},
      {{e / 2, t / 2, h / 2}, {e / 2, t / 2, h / 2}},
      {{e / 2, e - t / 2, h / 2}, {e / 2, t / 2, h / 2}},
  };
}

}  // namespace

WorldModel generateWorld(WorldKind kind, double extent_m, uint64_t seed,
                         double resolution, double height_m) {
  if (extent_m <= 0.0) {
    throw std::invalid_argument("generateWorld: extent must be > 0");
  }
  const Aabb bounds{{0, 0, 0}, {extent_m, extent_m, height_m}};
  const Vec3 spawn(extent_m / 2, extent_m / 2, 1.0);
  std::vector<BoxPrimitive> boxes;
  std::vector<CylinderPrimitive> cylinders;
  std::mt19937 rng(static_cast<uint32_t>(seed ^ 0x9e3779b9));

  switch (kind) {
    case WorldKind::Room:
      boxes = perimeterWalls(extent_m, height_m, resolution);
      break;

    case WorldKind::Forest: {
      // Tree count ~ Poisson(0.05 trees/m^2 * area); trunks are full-height
      // cylinders with a minimum spacing and a cleared spawn disk.
      std::poisson_distribution<int> count_dist(0.05 * extent_m * extent_m);
      std::uniform_real_distribution<double> pos_dist(0.6, extent_m - 0.6);
      std::uniform_real_distribution<double> radius_dist(0.15, 0.4);
      const int target = count_dist(rng);
      const double min_sep = 1.2;
      int attempts = 0;
      while (static_cast<int>(cylinders.size()) < target &&
             attempts < target * 200 + 200) {
        ++attempts;
        const double cx = pos_dist(rng);
        const double cy = pos_dist(rng);
        const double r = radius_dist(rng);
        const double dx = cx - spawn.x(), dy = cy - spawn.y();
        if (dx * dx + dy * dy < (2.0 + r) * (2.0 + r)) continue;
        bool clear = true;
        for (const CylinderPrimitive& c : cylinders) {
          const double ex = cx - c.cx, ey = cy - c.cy;
          if (ex * ex + ey * ey < min_sep * min_sep) {
            clear = false;
            break;
          }
        }
        if (!clear) continue;
        cylinders.push_back({cx, cy, r, 0.0, height_m});
      }
      break;
    }

    case WorldKind::Warehouse: {
      boxes = perimeterWalls(extent_m, height_m, resolution);
      // Rack rows every 4 m with jittered placement, keeping the spawn and
      // a perimeter aisle clear.
      std::uniform_real_distribution<double> jitter(-0.3, 0.3);
      for (double ry = 3.0; ry < extent_m - 3.0; ry += 4.0) {
        for (double rx = 3.0; rx < extent_m - 3.0; rx += 4.0) {
          const double cx = rx + jitter(rng);
          const double cy = ry + jitter(rng);
          const double dx = cx - spawn.x(), dy = cy - spawn.y();
          if (dx * dx + dy * dy < 2.5 * 2.5) continue;
          boxes.push_back({{cx, cy, 1.25}, {1.0, 0.4, 1.25}});
        }
      }
      break;
    }
  }
  return WorldModel(bounds, std::move(boxes), std::move(cylinders),
                    resolution);
}

void saveWorld(const WorldModel& world, std::ostream& os) {
  const Aabb& b = world.bounds();
  os << "bounds " << b.min.x() << ' ' << b.min.y() << ' ' << b.min.z() << ' '
     << b.max.x() << ' ' << b.max.y() << ' ' << b.max.z() << '\n';
  for (const BoxPrimitive& box : world.boxes()) {
    os << "box " << box.center.x() << ' ' << box.center.y() << ' '
       << box.center.z() << ' ' << box.half_extents.x() << ' '
       << box.half_extents.y() << ' ' << box.half_extents.z() << '\n';
  }
  for (const CylinderPrimitive& c : world.cylinders()) {
    os << "cyl " << c.cx << ' ' << c.cy << ' ' << c.radius << ' ' << c.z0
       << ' ' << c.z1 << '\n';
  }
}

WorldModel loadWorld(std::istream& is, double resolution) {
  Aabb bounds;
  bool have_bounds = false;
  std::vector<BoxPrimitive> boxes;
  std::vector<CylinderPrimitive> cylinders;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "bounds") {
      ls >> bounds.min.x() >> bounds.min.y() >> bounds.min.z() >>
          bounds.max.x() >> bounds.max.y() >> bounds.max.z();
      have_bounds = true;
    } else if (tag == "box") {
      BoxPrimitive b;
      ls >> b.center.x() >> b.center.y() >> b.center.z() >>
          b.half_extents.x() >> b.half_extents.y() >> b.half_extents.z();
      boxes.push_back(b);
    } else if (tag == "cyl") {
      CylinderPrimitive c;
      ls >> c.cx >> c.cy >> c.radius >> c.z0 >> c.z1;
      cylinders.push_back(c);
    } else {
      throw std::runtime_error("world file line " + std::to_string(line_no) +
                               ": unknown tag '" + tag + "'");
    }
    if (ls.fail()) {
      throw std::runtime_error("world file line " + std::to_string(line_no) +
                               ": malformed values");
    }
  }
  if (!have_bounds) {
    throw std::runtime_error("world file: missing bounds line");
  }
  return WorldModel(bounds, std::move(boxes), std::move(cylinders),
                    resolution);
}

WorldModel loadWorldFile(const std::string& path, double resolution) {
  std::ifstream is(path);
  if (!is) {
    throw std::runtime_error("cannot open world file: " + path);
  }
  return loadWorld(is, resolution);
}

namespace {

struct RayResult {
  bool has_hit = false;
  Vec3 hit{0, 0, 0};
  bool has_free_end = false;
  Vec3 free_end{0, 0, 0};
};

RayResult traceRay(const WorldModel& world, const Vec3& origin,
                   const Vec3& dir, double max_range) {
  const GridFrame& frame = world.frame();
  RayResult out;
  double last_t = 0.0;
  std::optional<VoxelKey> last_key;
  std::optional<VoxelKey> hit_key;
  double hit_entry = 0.0;
  const detail::WalkEnd end_reason = detail::walkGrid(
      frame, origin, dir, max_range, [&](const VoxelKey& k, double t) {
        last_t = t;
        last_key = k;
        if (world.occupied(k)) {
          hit_key = k;
          hit_entry = t;
          return false;
        }
        return true;
      });

  if (hit_key) {
    // Emit a point strictly inside the hit voxel. If rounding pushes the
    // point into a neighboring cell (degenerate corner chord), fall back to
    // truncating the ray just before the voxel so the free-space carve can
    // never cross it.
    const double exit_t = frame.voxelExitT(*hit_key, origin, dir);
    const double depth = std::min(frame.resolution / 8.0,
                                  std::max(exit_t - hit_entry, 0.0) / 2.0);
    const Vec3 p = origin + dir * (hit_entry + depth);
    const auto check = frame.tryKeyAt(p);
    if (check && *check == *hit_key) {
      out.has_hit = true;
      out.hit = p;
      return out;
    }
    const double back_t = std::max(hit_entry - frame.resolution / 8.0, 0.0);
    if (back_t > 1e-9) {
      out.has_free_end = true;
      out.free_end = origin + dir * back_t;
    }
    return out;
  }

  // No return within range: the walk verified every visited voxel empty,
  // including the last one. Record the truncation point inside it so the
  // carve reaches the whole observed corridor (otherwise voxels on the
  // world boundary could never become known).
  if (!last_key) return out;
  Vec3 p;
  if (end_reason == detail::WalkEnd::RangeEnd) {
    p = origin + dir * max_range;
  } else {  // stepped off the world edge
    const double exit_t = frame.voxelExitT(*last_key, origin, dir);
    const double depth = std::min(frame.resolution / 8.0,
                                  std::max(exit_t - last_t, 0.0) / 2.0);
    p = origin + dir * (last_t + depth);
  }
  const auto check = frame.tryKeyAt(p);
  if (check && world.bounds().contains(p)) {
    out.has_free_end = true;
    out.free_end = p;
  } else if (last_t > 1e-9) {
    // Rounding escaped the voxel; truncate just before it instead.
    const Vec3 fallback = origin + dir * (last_t - 1e-9);
    if (world.bounds().contains(fallback)) {
      out.has_free_end = true;
      out.free_end = fallback;
    }
  }
  return out;
}

}  // namespace

ScanInput simulateScan(const WorldModel& world, const SensorModel& model,
                       const SensorPose& pose, ExecMode mode,
                       double noise_sigma, uint64_t noise_seed) {
  if (world.occupiedAt(pose.position)) {
    throw std::invalid_argument("simulateScan: pose inside an obstacle");
  }
  const size_t n = model.rayCount();
  std::vector<RayResult> results(n);
  const double max_range = model.maxRange();

  if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < static_cast<int64_t>(n); ++i) {
      results[i] = traceRay(world, pose.position,
                            model.rotatedDirection(i, pose.yaw), max_range);
    }
  } else {
    for (size_t i = 0; i < n; ++i) {
      results[i] = traceRay(world, pose.position,
                            model.rotatedDirection(i, pose.yaw), max_range);
    }
  }

  if (noise_sigma > 0.0) {
    std::mt19937 rng(static_cast<uint32_t>(noise_seed ^ 0x51ed2701));
    std::normal_distribution<double> noise(0.0, noise_sigma);
    for (size_t i = 0; i < n; ++i) {
      if (!results[i].has_hit) continue;
      const Vec3 dir = model.rotatedDirection(i, pose.yaw);
      const double d = (results[i].hit - pose.position).norm();
      const double dn = std::clamp(d + noise(rng), 0.1, max_range);
      const Vec3 p = pose.position + dir * dn;
      if (world.bounds().contains(p)) {
        results[i].hit = p;
      } else {
        results[i].has_hit = false;
      }
    }
  }

  ScanInput scan;
  scan.origin = pose;
  for (const RayResult& r : results) {
    if (r.has_hit) scan.points.push_back(r.hit);
    if (r.has_free_end) scan.free_endpoints.push_back(r.free_end);
  }
  return scan;
}

RobotState stepRobot(const RobotState& state, const Path& path,
                     double& progress_m) {
  if (path.waypoints.empty()) {
    throw std::invalid_argument("stepRobot: empty path");
  }
  progress_m = std::min(progress_m + state.v_max * state.tick_dt, path.length);
  RobotState next = state;
  next.position = path.pointAt(progress_m);
  return next;
}

double coverage(const WorldModel& world, const OccupancyOctree& map) {
  const GridFrame& frame = world.frame();
  int64_t known = 0;
  for (int32_t x = 0; x < frame.nx; ++x) {
    for (int32_t y = 0; y < frame.ny; ++y) {
      for (int32_t z = 0; z < frame.nz; ++z) {
        const VoxelKey k{x, y, z};
        if (!world.observable(k)) continue;
        if (map.search(frame.centerOf(k)) != nullptr) ++known;
      }
    }
  }
  const int64_t total = world.observableCount();
  return total > 0 ? static_cast<double>(known) / total : 0.0;
}

}  // namespace explore
