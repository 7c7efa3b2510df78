#pragma once

#include "explore/exec.hpp"
#include "explore/frontier_store.hpp"
#include "explore/geometry.hpp"
#include "explore/gp_gain.hpp"
#include "explore/occupancy_octree.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace explore {

struct MeanShiftParams {
  double bandwidth = 2.0;        // Gaussian kernel bandwidth h, meters
  double convergence_eps = 1e-3; // stop when the shift falls below this
  int max_iters = 100;
  double merge_radius = 1.0;     // converged modes closer than this merge
};

/// Gaussian-kernel mean shift: every point is iterated to its density mode
/// against the fixed input set, then modes within the merge radius collapse.
/// Returns the deduplicated mode centers, deterministic in input order.
std::vector<Vec3> meanShift(const std::vector<Vec3>& points,
                            const MeanShiftParams& params,
                            ExecMode mode = ExecMode::Serial);

/// Per-iteration maximum shift magnitudes of the slowest-converging point,
/// for convergence diagnostics.
std::vector<Vec3> meanShiftWithTrace(const std::vector<Vec3>& points,
                                     const MeanShiftParams& params,
                                     std::vector<double>* max_shift_trace,
                                     ExecMode mode = ExecMode::Serial);

enum class GainMode {
  AsPrinted,    // gain grows with distance: I * exp(+lambda_g * d)
  Attenuating,  // conventional distance penalty: I * exp(-lambda_g * d)
};

struct GainParams {
  double lambda_g = 0.5;       // 1/meters
  double cube_half_edge = 2.5; // meters
  GainMode gain_mode = GainMode::Attenuating;
};

/// Number of unknown voxels in the cube centered at the candidate.
int64_t deterministicGain(const OccupancyOctree& map, const Vec3& v_c,
                          const GainParams& params,
                          ExecMode mode = ExecMode::Serial);

/// Distance-weighted exploratory gain of a candidate with information
/// measure `info`.
double explorationGain(double info, const Vec3& robot_pos, const Vec3& v_c,
                       const GainParams& params);

enum class GainSource { Deterministic, Gp };

struct CandidateViewpoint {
  Vec3 position{0, 0, 0};
  int cluster_size = 0;
  BoxCounts features;
  double info = 0.0;  // unknown-voxel count or GP-predicted bits
  double gain = 0.0;  // exploration gain G
};

struct RankTiming {
  int64_t t_cluster_us = 0;
  int64_t t_gain_us = 0;
};

/// Clusters the current frontier snapshot and scores every candidate.
/// Returned list is sorted by descending gain (ties: nearer first, then
/// lexicographic position). Empty when there are no frontiers or no valid
/// candidate survives.
std::vector<CandidateViewpoint> rankCandidates(
    const OccupancyOctree& map, const FrontierStore& frontiers,
    const Vec3& robot_pos, GainSource source, const GainParams& gain_params,
    const MeanShiftParams& cluster_params,
    const GainRegressor* regressor = nullptr,
    ExecMode mode = ExecMode::Serial, RankTiming* timing = nullptr);

/// Best-scoring candidate, or nullopt when the frontier set is empty
/// (exploration complete).
std::optional<CandidateViewpoint> selectBest(
    const OccupancyOctree& map, const FrontierStore& frontiers,
    const Vec3& robot_pos, GainSource source, const GainParams& gain_params,
    const MeanShiftParams& cluster_params,
    const GainRegressor* regressor = nullptr,
    ExecMode mode = ExecMode::Serial);

}  // namespace explore
