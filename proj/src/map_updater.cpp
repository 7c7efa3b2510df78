#include "explore/map_updater.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace explore {

namespace {

using Clock = std::chrono::steady_clock;

int64_t usSince(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() -
                                                               start)
      .count();
}

double binaryEntropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -(p * std::log2(p) + (1.0 - p) * std::log2(1.0 - p));
}

}  // namespace

double entropyInBox(const OccupancyOctree& map, const Aabb& box,
                    ExecMode mode) {
  const KeyRange r = map.rangeForBox(box);
  if (r.empty()) return 0.0;

  auto slabEntropy = [&](int32_t x) {
    double e = 0.0;
    for (int32_t y = r.lo.y; y <= r.hi.y; ++y) {
      for (int32_t z = r.lo.z; z <= r.hi.z; ++z) {
        const LeafNode* node = map.search(VoxelKey{x, y, z});
        if (node == nullptr) {
          e += 1.0;  // unknown voxel: p = 0.5, one full bit
        } else {
          e += binaryEntropy(probabilityOf(node->log_odds));
        }
      }
    }
    return e;
  };

  const int32_t n_slabs = r.hi.x - r.lo.x + 1;
  std::vector<double> partial(n_slabs, 0.0);
  if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
    for (int32_t i = 0; i < n_slabs; ++i) {
      partial[i] = slabEntropy(r.lo.x + i);
    }
  } else {
    for (int32_t i = 0; i < n_slabs; ++i) {
      partial[i] = slabEntropy(r.lo.x + i);
    }
  }
  double total = 0.0;
  for (double e : partial) total += e;  // fixed slab order
  return total;
}

std::vector<RayProbe> castSweepBundle(const OccupancyOctree& map,
                                      const SensorModel& model,
                                      const SensorPose& pose, ExecMode mode) {
  const size_t n = model.rayCount();
  std::vector<RayProbe> probes(n);
  const double max_range = model.maxRange();
  if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < static_cast<int64_t>(n); ++i) {
      probes[i] = map.probeRay(pose.position,
                               model.rotatedDirection(i, pose.yaw), max_range);
    }
  } else {
    for (size_t i = 0; i < n; ++i) {
      probes[i] = map.probeRay(pose.position,
                               model.rotatedDirection(i, pose.yaw), max_range);
    }
  }
  return probes;
}

std::pair<size_t, size_t> updateFreeSpace(OccupancyOctree& map,
                                          FrontierStore& frontiers,
                                          const SensorModel& model,
                                          const SensorPose& pose,
                                          ExecMode mode) {
  // Phase 1: read-only probes. During the apply phase below no voxel changes
  // classification (misses keep free voxels free and unknown voxels are
  // never touched), so probing everything up front is observably identical
  // to interleaving.
  const std::vector<RayProbe> probes = castSweepBundle(map, model, pose, mode);

  size_t n_free_updates = 0;
  size_t n_inserts = 0;
  const double max_range = model.maxRange();

  // Phase 2: serial application in ray order.
  for (size_t i = 0; i < probes.size(); ++i) {
    const RayProbe& probe = probes[i];
    if (probe.stop == RayProbe::Stop::Occupied) continue;  // true hit

    const Vec3 dir = model.rotatedDirection(i, pose.yaw);
    if (probe.saw_free) {
      // Re-mark the known-free corridor. The walk revisits the voxels the
      // probe saw; occupied voxels are never downgraded (a no-hit corridor
      // has none, and the guard keeps it that way regardless).
      if ((probe.last_free_center - pose.position).norm() < 1e-12) {
        const VoxelKey k = map.keyAt(pose.position);
        if (map.stateOf(k) == OccupancyState::Free) {
          map.updateNode(k, false);
          ++n_free_updates;
        }
      } else {
        for (const VoxelKey& k :
             map.traverseRay(pose.position, probe.last_free_center)) {
          if (map.stateOf(k) == OccupancyState::Free) {
            map.updateNode(k, false);
            ++n_free_updates;
          }
        }
      }
    }

    // Frontier insertion. For a corridor that ended in unknown space the
    // candidate sits one voxel past the last free voxel; for a corridor
    // that reached the range limit it sits one voxel past the range end.
    Vec3 ray_end;
    if (probe.stop == RayProbe::Stop::Unknown) {
      if (probe.saw_free &&
          (probe.last_free_center - pose.position).norm() > 1e-12) {
        ray_end = probe.last_free_center;
      } else {
        // Unknown from the first step: aim just past the pose so the
        // candidate lands one voxel out.
        ray_end = pose.position + dir * 1e-6;
      }
    } else if (probe.stop == RayProbe::Stop::Range) {
      ray_end = pose.position + dir * max_range;
    } else {
      continue;  // walked off the map edge; nothing behind it to explore
    }
    if (frontiers.insertCandidate(map, pose.position, ray_end)) {
      ++n_inserts;
    }
  }
  return {n_free_updates, n_inserts};
}

Aabb entropyBoxFor(const OccupancyOctree& map, const SensorModel& model,
                   const ScanInput& scan) {
  if (scan.points.empty()) {
    return Aabb::cube(scan.origin.position, model.maxRange())
        .clippedTo(map.bounds());
  }
  Aabb box{scan.points.front(), scan.points.front()};
  for (const Vec3& p : scan.points) {
    box.min = box.min.cwiseMin(p);
    box.max = box.max.cwiseMax(p);
  }
  return box.expanded(map.resolution()).clippedTo(map.bounds());
}

UpdateReport processScan(OccupancyOctree& map, FrontierStore& frontiers,
                         const SensorModel& model, const ScanInput& scan,
                         ExecMode mode) {
  if (!map.bounds().contains(scan.origin.position)) {
    throw std::out_of_range("processScan: scan origin outside map bounds");
  }
  UpdateReport report;
  const auto t0 = Clock::now();
  const Aabb bbx = entropyBoxFor(map, model, scan);

  report.entropy_before = entropyInBox(map, bbx, mode);

  // Inverse sensor model: endpoint hits plus the free space along each ray.
  for (const Vec3& p : scan.points) {
    if (!map.bounds().contains(p)) {
      throw std::out_of_range("processScan: scan point outside map bounds");
    }
    map.updateNode(map.keyAt(p), true);
    ++report.n_hits;
    report.n_misses += map.insertRay(scan.origin.position, p);
  }
  // Rays with no return: carve the observed-empty corridor. The endpoint
  // voxel was verified empty by the same observation, so it receives a miss
  // as well (unlike a hit ray's endpoint).
  for (const Vec3& p : scan.free_endpoints) {
    if (!map.bounds().contains(p)) {
      throw std::out_of_range("processScan: free endpoint outside map bounds");
    }
    if ((p - scan.origin.position).norm() < 1e-12) continue;
    report.n_misses += map.insertRay(scan.origin.position, p);
    map.updateNode(map.keyAt(p), false);
    ++report.n_misses;
  }
  const int64_t t_inverse = usSince(t0);

  const auto t1 = Clock::now();
  auto [n_free, n_inserts] =
      updateFreeSpace(map, frontiers, model, scan.origin, mode);
  report.n_misses += n_free;
  report.n_frontiers_added = n_inserts;
  const int64_t t_sweep = usSince(t1);

  const auto t2 = Clock::now();
  report.entropy_after = entropyInBox(map, bbx, mode);
  report.info_gain = report.entropy_before - report.entropy_after;
  const int64_t t_entropy_after = usSince(t2);

  const auto t3 = Clock::now();
  const FrontierCorrection correction =
      frontiers.correct(map, scan.origin.position);
  report.n_frontiers_removed =
      correction.n_erased_known + correction.n_erased_near;
  const int64_t t_correct = usSince(t3);

  report.t_map_us = t_inverse + t_entropy_after;
  report.t_frontier_us = t_sweep + t_correct;
  report.t_total_us = usSince(t0);
  return report;
}

}  // namespace explore
