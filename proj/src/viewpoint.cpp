#include "explore/viewpoint.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace explore {

namespace {

Vec3 shiftOnce(const Vec3& x, const Eigen::Matrix3Xd& data, double inv_2h2) {
  const Eigen::ArrayXd d2 =
      (data.colwise() - x).colwise().squaredNorm().transpose();
  const Eigen::ArrayXd w = (-d2 * inv_2h2).exp();
  const double den = w.sum();
  if (den <= 0.0) return x;
  return data * w.matrix() / den;
}

}  // namespace

std::vector<Vec3> meanShiftWithTrace(const std::vector<Vec3>& points,
                                     const MeanShiftParams& params,
                                     std::vector<double>* max_shift_trace,
                                     ExecMode mode) {
  if (points.empty()) return {};
  const double eps2 = params.convergence_eps * params.convergence_eps;
  const double inv_2h2 = 1.0 / (2.0 * params.bandwidth * params.bandwidth);

  Eigen::Matrix3Xd data(3, points.size());
  for (size_t i = 0; i < points.size(); ++i) data.col(i) = points[i];

  std::vector<Vec3> modes(points.size());
  std::vector<std::vector<double>> traces;
  if (max_shift_trace != nullptr) traces.resize(points.size());

  auto iterate = [&](size_t i) {
    Vec3 x = points[i];
    for (int it = 0; it < params.max_iters; ++it) {
      const Vec3 next = shiftOnce(x, data, inv_2h2);
      const double shift2 = (next - x).squaredNorm();
      if (max_shift_trace != nullptr) traces[i].push_back(std::sqrt(shift2));
      x = next;
      if (shift2 < eps2) break;
    }
    modes[i] = x;
  };

  if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < static_cast<int64_t>(points.size()); ++i) {
      iterate(static_cast<size_t>(i));
    }
  } else {
    for (size_t i = 0; i < points.size(); ++i) iterate(i);
  }

  if (max_shift_trace != nullptr) {
    size_t longest = 0;
    for (const auto& t : traces) longest = std::max(longest, t.size());
    max_shift_trace->assign(longest, 0.0);
    for (const auto& t : traces) {
      for (size_t j = 0; j < t.size(); ++j) {
        (*max_shift_trace)[j] = std::max((*max_shift_trace)[j], t[j]);
      }
    }
  }

  // Merge converged modes in input order; each cluster keeps the running
  // mean of its member modes.
  std::vector<Vec3> centers;
  std::vector<int> counts;
  const double merge2 = params.merge_radius * params.merge_radius;
  for (const Vec3& m : modes) {
    bool merged = false;
    for (size_t c = 0; c < centers.size(); ++c) {
      if ((centers[c] - m).squaredNorm() <= merge2) {
        centers[c] = (centers[c] * counts[c] + m) / (counts[c] + 1);
        ++counts[c];
        merged = true;
        break;
      }
    }
    if (!merged) {
      centers.push_back(m);
      counts.push_back(1);
    }
  }
  return centers;
}

std::vector<Vec3> meanShift(const std::vector<Vec3>& points,
                            const MeanShiftParams& params, ExecMode mode) {
  return meanShiftWithTrace(points, params, nullptr, mode);
}

int64_t deterministicGain(const OccupancyOctree& map, const Vec3& v_c,
                          const GainParams& params, ExecMode mode) {
  return map.countStatesInBox(v_c, params.cube_half_edge, mode).n_unknown;
}

double explorationGain(double info, const Vec3& robot_pos, const Vec3& v_c,
                       const GainParams& params) {
  const double d = (robot_pos - v_c).norm();
  const double sign = params.gain_mode == GainMode::AsPrinted ? 1.0 : -1.0;
  return info * std::exp(sign * params.lambda_g * d);
}

namespace {

// Cluster means can land inside obstacles; try the nearest free voxel
// center within 2 m, otherwise the candidate is dropped.
std::optional<Vec3> projectToFree(const OccupancyOctree& map, const Vec3& p) {
  if (map.stateAt(p) != OccupancyState::Occupied) return p;
  const KeyRange r = map.rangeForBox(Aabb::cube(p, 2.0));
  double best_d2 = std::numeric_limits<double>::infinity();
  std::optional<Vec3> best;
  for (int32_t x = r.lo.x; x <= r.hi.x; ++x) {
    for (int32_t y = r.lo.y; y <= r.hi.y; ++y) {
      for (int32_t z = r.lo.z; z <= r.hi.z; ++z) {
        const VoxelKey k{x, y, z};
        if (map.stateOf(k) != OccupancyState::Free) continue;
        const Vec3 c = map.centerOf(k);
        const double d2 = (c - p).squaredNorm();
        if (d2 < best_d2) {
          best_d2 = d2;
          best = c;
        }
      }
    }
  }
  if (best && best_d2 <= 4.0) return best;
  return std::nullopt;
}

}  // namespace

std::vector<CandidateViewpoint> rankCandidates(
    const OccupancyOctree& map, const FrontierStore& frontiers,
    const Vec3& robot_pos, GainSource source, const GainParams& gain_params,
    const MeanShiftParams& cluster_params, const GainRegressor* regressor,
    ExecMode mode, RankTiming* timing) {
  const auto t_cluster0 = std::chrono::steady_clock::now();
  const std::vector<Vec3> points = frontiers.snapshot();
  if (points.empty()) return {};

  const std::vector<Vec3> centers = meanShift(points, cluster_params, mode);
  if (timing != nullptr) {
    timing->t_cluster_us = std::chrono::duration_cast<std::chrono::microseconds>(
                               std::chrono::steady_clock::now() - t_cluster0)
                               .count();
  }
  const auto t_gain0 = std::chrono::steady_clock::now();

  std::vector<CandidateViewpoint> candidates;
  candidates.reserve(centers.size());
  for (const Vec3& raw_center : centers) {
    const auto center = projectToFree(map, raw_center);
    if (!center) continue;
    CandidateViewpoint c;
    c.position = *center;
    c.features =
        map.countStatesInBox(c.position, gain_params.cube_half_edge, mode);
    candidates.push_back(c);
  }
  if (candidates.empty()) return {};

  // Cluster sizes: each frontier point counts toward its nearest candidate.
  for (const Vec3& p : points) {
    size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < candidates.size(); ++i) {
      const double d2 = (candidates[i].position - p).squaredNorm();
      if (d2 < best_d2) {
        best_d2 = d2;
        best = i;
      }
    }
    ++candidates[best].cluster_size;
  }

  if (source == GainSource::Gp && regressor != nullptr &&
      !regressor->empty()) {
    std::vector<Vec3> feats;
    feats.reserve(candidates.size());
    for (const auto& c : candidates) {
      feats.emplace_back(static_cast<double>(c.features.n_free),
                         static_cast<double>(c.features.n_occupied),
                         static_cast<double>(c.features.n_unknown));
    }
    const std::vector<double> preds = regressor->predictBatch(feats, mode);
    for (size_t i = 0; i < candidates.size(); ++i) {
      candidates[i].info = preds[i];
    }
  } else {
    for (auto& c : candidates) {
      c.info = static_cast<double>(c.features.n_unknown);
    }
  }

  for (auto& c : candidates) {
    c.gain = explorationGain(c.info, robot_pos, c.position, gain_params);
  }

  std::sort(candidates.begin(), candidates.end(),
            [&](const CandidateViewpoint& a, const CandidateViewpoint& b) {
              if (a.gain != b.gain) return a.gain > b.gain;
              const double da = (a.position - robot_pos).squaredNorm();
              const double db = (b.position - robot_pos).squaredNorm();
              if (da != db) return da < db;
              return std::lexicographical_compare(
                  a.position.data(), a.position.data() + 3, b.position.data(),
                  b.position.data() + 3);
            });
  if (timing != nullptr) {
    timing->t_gain_us = std::chrono::duration_cast<std::chrono::microseconds>(
                            std::chrono::steady_clock::now() - t_gain0)
                            .count();
  }
  return candidates;
}

std::optional<CandidateViewpoint> selectBest(
    const OccupancyOctree& map, const FrontierStore& frontiers,
    const Vec3& robot_pos, GainSource source, const GainParams& gain_params,
    const MeanShiftParams& cluster_params, const GainRegressor* regressor,
    ExecMode mode) {
  const auto ranked = rankCandidates(map, frontiers, robot_pos, source,
                                     gain_params, cluster_params, regressor,
                                     mode);
  if (ranked.empty()) return std::nullopt;
  return ranked.front();
}

}  // namespace explore
