#include "explore/occupancy_octree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace explore {

double logOdds(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("logOdds: probability must be in (0,1)");
  }
  return std::log(p / (1.0 - p));
}

double probabilityOf(double log_odds) {
  return 1.0 / (1.0 + std::exp(-log_odds));
}

double bayesUpdateReference(double p_prior, double p_meas) {
  if (!(p_prior > 0.0 && p_prior < 1.0) || !(p_meas > 0.0 && p_meas < 1.0)) {
    throw std::invalid_argument(
        "bayesUpdateReference: probabilities must be in (0,1)");
  }
  // Uniform prior P(n) = 0.5 makes the prior odds ratio 1.
  const double odds_inv = (1.0 - p_meas) / p_meas * (1.0 - p_prior) / p_prior;
  return 1.0 / (1.0 + odds_inv);
}

OccupancyOctree::OccupancyOctree(const Aabb& bounds, double resolution,
                                 OccupancyParams params)
    : bounds_(bounds), resolution_(resolution), params_(params) {
  if (resolution <= 0.0) {
    throw std::invalid_argument("OccupancyOctree: resolution must be > 0");
  }
  const Vec3 ext = bounds.extent();
  if (ext.minCoeff() <= 0.0) {
    throw std::invalid_argument("OccupancyOctree: degenerate bounds");
  }
  frame_.min = bounds.min;
  frame_.resolution = resolution;
  frame_.nx = std::max<int32_t>(
      1, static_cast<int32_t>(std::ceil(ext.x() / resolution - 1e-9)));
  frame_.ny = std::max<int32_t>(
      1, static_cast<int32_t>(std::ceil(ext.y() / resolution - 1e-9)));
  frame_.nz = std::max<int32_t>(
      1, static_cast<int32_t>(std::ceil(ext.z() / resolution - 1e-9)));
  const int32_t largest = std::max({frame_.nx, frame_.ny, frame_.nz});
  depth_ = 1;
  while ((1 << depth_) < largest) ++depth_;

  l_hit_ = logOdds(params_.p_hit);
  l_miss_ = logOdds(params_.p_miss);
  l_min_ = logOdds(params_.p_clamp_min);
  l_max_ = logOdds(params_.p_clamp_max);
  l_tau_ = logOdds(params_.occupancy_threshold);
}

std::optional<VoxelKey> OccupancyOctree::tryKeyAt(const Vec3& p) const {
  if (!bounds_.contains(p)) return std::nullopt;
  return frame_.tryKeyAt(p);
}

VoxelKey OccupancyOctree::keyAt(const Vec3& p) const {
  auto k = tryKeyAt(p);
  if (!k) throw std::out_of_range("keyAt: point outside map bounds");
  return *k;
}

Vec3 OccupancyOctree::centerOf(const VoxelKey& k) const {
  return frame_.centerOf(k);
}

bool OccupancyOctree::inBounds(const VoxelKey& k) const {
  return frame_.inBounds(k);
}

const LeafNode* OccupancyOctree::search(const VoxelKey& k) const {
  auto it = nodes_.find(k);
  return it == nodes_.end() ? nullptr : &it->second;
}

const LeafNode* OccupancyOctree::search(const Vec3& p) const {
  auto k = tryKeyAt(p);
  return k ? search(*k) : nullptr;
}

OccupancyState OccupancyOctree::stateOfNode(const LeafNode* node) const {
  if (node == nullptr) return OccupancyState::Unknown;
  return node->log_odds > l_tau_ ? OccupancyState::Occupied
                                 : OccupancyState::Free;
}

OccupancyState OccupancyOctree::stateOf(const VoxelKey& k) const {
  return stateOfNode(search(k));
}

OccupancyState OccupancyOctree::stateAt(const Vec3& p) const {
  return stateOfNode(search(p));
}

OccupancyState OccupancyOctree::updateNode(const VoxelKey& k,
                                           bool occupied_measurement) {
  if (!inBounds(k)) {
    throw std::out_of_range("updateNode: key outside map bounds");
  }
  LeafNode& node = nodes_[k];  // created at the uniform prior (L = 0)
  node.log_odds += occupied_measurement ? l_hit_ : l_miss_;
  node.log_odds = std::clamp(node.log_odds, l_min_, l_max_);
  return stateOfNode(&node);
}

std::vector<VoxelKey> OccupancyOctree::traverseRay(const Vec3& origin,
                                                   const Vec3& end) const {
  const Vec3 diff = end - origin;
  const double len = diff.norm();
  if (len <= 0.0) {
    throw std::invalid_argument("traverseRay: zero-length segment");
  }
  const VoxelKey end_key = keyAt(end);
  keyAt(origin);  // bounds check
  const Vec3 dir = diff / len;

  std::vector<VoxelKey> keys;
  keys.reserve(static_cast<size_t>(len / resolution_) * 2 + 4);
  detail::walkGrid(frame_, origin, dir, len, [&](const VoxelKey& k, double) {
    keys.push_back(k);
    return !(k == end_key);
  });
  if (keys.empty() || !(keys.back() == end_key)) {
    // Floating-point boundary disagreement between the walk and keyAt(end);
    // the end voxel is adjacent at this point.
    keys.push_back(end_key);
  }
  return keys;
}

std::optional<RayHit> OccupancyOctree::castRay(const Vec3& origin,
                                               const Vec3& direction,
                                               double max_range) const {
  if (std::abs(direction.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("castRay: direction must be unit length");
  }
  if (max_range <= 0.0) {
    throw std::invalid_argument("castRay: max_range must be > 0");
  }
  std::optional<RayHit> hit;
  detail::walkGrid(frame_, origin, direction, max_range,
                   [&](const VoxelKey& k, double t) {
                     if (stateOf(k) == OccupancyState::Occupied) {
                       hit = RayHit{k, t};
                       return false;
                     }
                     return true;
                   });
  return hit;
}

RayProbe OccupancyOctree::probeRay(const Vec3& origin, const Vec3& direction,
                                   double max_range) const {
  RayProbe probe;
  probe.t_stop = 0.0;
  probe.last_free_center = origin;
  const detail::WalkEnd end = detail::walkGrid(
      frame_, origin, direction, max_range, [&](const VoxelKey& k, double t) {
        probe.t_stop = t;
        const OccupancyState s = stateOf(k);
        if (s == OccupancyState::Occupied) {
          probe.stop = RayProbe::Stop::Occupied;
          probe.stop_key = k;
          return false;
        }
        if (s == OccupancyState::Unknown) {
          probe.stop = RayProbe::Stop::Unknown;
          probe.stop_key = k;
          return false;
        }
        probe.last_free_center = centerOf(k);
        probe.saw_free = true;
        ++probe.corridor_len;
        return true;
      });
  if (end == detail::WalkEnd::RangeEnd) {
    probe.stop = RayProbe::Stop::Range;
    probe.t_stop = max_range;
  } else if (end == detail::WalkEnd::GridExit) {
    probe.stop = RayProbe::Stop::Bounds;
  }
  return probe;
}

size_t OccupancyOctree::insertRay(const Vec3& origin, const Vec3& hit) {
  const std::vector<VoxelKey> keys = traverseRay(origin, hit);
  size_t misses = 0;
  for (size_t i = 0; i + 1 < keys.size(); ++i) {
    updateNode(keys[i], false);
    ++misses;
  }
  return misses;
}

KeyRange OccupancyOctree::rangeForBox(const Aabb& box) const {
  KeyRange r;
  const Aabb clipped = box.clippedTo(bounds_);
  int32_t* lo[3] = {&r.lo.x, &r.lo.y, &r.lo.z};
  int32_t* hi[3] = {&r.hi.x, &r.hi.y, &r.hi.z};
  for (int i = 0; i < 3; ++i) {
    const double a = (clipped.min[i] - bounds_.min[i]) / resolution_ - 0.5;
    const double b = (clipped.max[i] - bounds_.min[i]) / resolution_ - 0.5;
    *lo[i] = std::max<int32_t>(0, static_cast<int32_t>(std::ceil(a)));
    *hi[i] = std::min<int32_t>(frame_.dim(i) - 1,
                               static_cast<int32_t>(std::floor(b)));
  }
  return r;
}

BoxCounts OccupancyOctree::countStatesInBox(const Vec3& center,
                                            double half_edge,
                                            ExecMode mode) const {
  if (half_edge <= 0.0) {
    throw std::invalid_argument("countStatesInBox: half_edge must be > 0");
  }
  const KeyRange r = rangeForBox(Aabb::cube(center, half_edge));
  if (r.empty()) return {};

  auto countSlab = [&](int32_t x) {
    BoxCounts c;
    for (int32_t y = r.lo.y; y <= r.hi.y; ++y) {
      for (int32_t z = r.lo.z; z <= r.hi.z; ++z) {
        switch (stateOf(VoxelKey{x, y, z})) {
          case OccupancyState::Free:
            ++c.n_free;
            break;
          case OccupancyState::Occupied:
            ++c.n_occupied;
            break;
          case OccupancyState::Unknown:
            ++c.n_unknown;
            break;
        }
      }
    }
    return c;
  };

  const int32_t n_slabs = r.hi.x - r.lo.x + 1;
  std::vector<BoxCounts> partial(n_slabs);
  if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
    for (int32_t i = 0; i < n_slabs; ++i) {
      partial[i] = countSlab(r.lo.x + i);
    }
  } else {
    for (int32_t i = 0; i < n_slabs; ++i) {
      partial[i] = countSlab(r.lo.x + i);
    }
  }
  BoxCounts total;
  for (const BoxCounts& c : partial) {
    total.n_free += c.n_free;
    total.n_occupied += c.n_occupied;
    total.n_unknown += c.n_unknown;
  }
  return total;
}

void OccupancyOctree::dump(std::ostream& os) const {
  std::vector<std::pair<uint64_t, const std::pair<const VoxelKey, LeafNode>*>>
      rows;
  rows.reserve(nodes_.size());
  for (const auto& kv : nodes_) {
    rows.emplace_back(mortonCode(kv.first), &kv);
  }
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  char line[128];
  for (const auto& [code, kv] : rows) {
    std::snprintf(line, sizeof(line), "%d %d %d %.6f\n", kv->first.x,
                  kv->first.y, kv->first.z, kv->second.log_odds);
    os << line;
  }
}

}  // namespace explore
