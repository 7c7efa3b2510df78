#pragma once

#include "explore/exec.hpp"
#include "explore/frontier_store.hpp"
#include "explore/geometry.hpp"
#include "explore/gp_gain.hpp"
#include "explore/map_updater.hpp"
#include "explore/nav_planner.hpp"
#include "explore/occupancy_octree.hpp"
#include "explore/sensor_model.hpp"
#include "explore/sim_world.hpp"
#include "explore/viewpoint.hpp"

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace explore {

enum class MissionMode { Asymp, AsympBayes };

struct MissionConfig {
  // map
  double map_resolution = 0.4;
  OccupancyParams occupancy;

  // forward sensor model H (frontier detection and free-space validation)
  SensorModelConfig sensor;

  // frontier maintenance. The clear radius must exceed the planner's
  // standoff from obstacles (inflation radius plus goal snapping), or
  // frontiers hugging walls can never be cleared by approach.
  double frontier_clear_radius = 2.0;

  // clustering and viewpoint scoring
  MeanShiftParams cluster;
  GainParams gain;

  // gain regressor
  GpHyperparams gp;

  // planning
  double plan_inflation = 0.6;
  bool plan_allow_unknown = false;
  double plan_goal_switch = 1.5;

  // simulation. The scan stands in for the SLAM submap: denser than the
  // forward model and shorter-ranged, so the forward rays probe past the
  // carved bubble and find its boundary.
  double tick_dt = 0.1;
  int scan_every_ticks = 10;
  double v_max = 1.0;
  double z_max = 3.0;
  double noise_sigma = 0.0;
  double scan_range = 6.0;
  int scan_density_factor = 2;

  // mission control
  double success_threshold = 0.90;
  double max_sim_time = 1000.0;
  bool stop_on_success = true;
  bool keep_final_state = false;
  ExecMode exec = ExecMode::Parallel;

  /// The scan model derived from the forward model: step sizes divided by
  /// the density factor, grid offset by half a step so no scan ray
  /// coincides with a forward ray, range capped at the submap reach.
  SensorModelConfig scanModelConfig() const;
};

/// Flat `key = value` config file. Unknown keys are hard errors that name
/// the offending key. Returns `base` with the parsed keys applied.
MissionConfig parseConfig(std::istream& is, MissionConfig base = {});
MissionConfig parseConfigFile(const std::string& path,
                              MissionConfig base = {});

struct MetricsRow {
  int64_t tick = 0;
  double sim_time_s = 0.0;
  double coverage_pct = 0.0;
  size_t n_frontiers = 0;
  double entropy_bits = 0.0;
  double info_gain_bits = 0.0;
  int64_t t_map_us = 0;
  int64_t t_frontier_us = 0;
  int64_t t_cluster_us = 0;
  int64_t t_gain_us = 0;
  int64_t t_plan_us = 0;
  Vec3 chosen{0, 0, 0};
};

/// One (features, prediction, observation) triple per update; regression
/// quality log for the gain estimator.
struct GpLogRow {
  int64_t tick = 0;
  BoxCounts features;
  double observed_gain_bits = 0.0;
  double predicted_gain_bits = 0.0;
};

/// One row per adopted viewpoint decision.
struct DecisionLogRow {
  int64_t tick = 0;
  size_t n_candidates = 0;
  Vec3 chosen{0, 0, 0};
  double info = 0.0;
  double gain = 0.0;
  GainSource source = GainSource::Deterministic;
};

enum class MissionEnd { Success, FrontierExhaustion, Timeout, Unreachable };

struct MissionResult {
  bool success = false;
  double sim_time_to_threshold = -1.0;
  double final_coverage = 0.0;
  MissionEnd end = MissionEnd::Timeout;
  std::vector<MetricsRow> timeline;
  std::vector<GpLogRow> gp_log;
  std::vector<DecisionLogRow> decision_log;
  size_t peak_frontiers = 0;
  size_t final_frontiers = 0;
  size_t n_updates = 0;
  size_t n_false_free = 0;  // mapped-free voxels that are ground-truth occupied
  size_t n_false_occupied = 0;
  size_t n_inflation_violations = 0;
  std::vector<int64_t> gp_update_us;  // per-update predict+observe time
  Vec3 start_position{0, 0, 0};

  // Populated when MissionConfig::keep_final_state is set.
  std::shared_ptr<OccupancyOctree> final_map;
  std::shared_ptr<GainRegressor> final_gp;
};

/// Full exploration loop: scan, map update, viewpoint selection, planning,
/// and kinematic motion, until the success threshold (unless configured to
/// continue), frontier exhaustion, or timeout. Deterministic per
/// (world, config, seed); the seed jitters the start position and drives
/// optional sensor noise.
MissionResult runMission(const WorldModel& world, const MissionConfig& config,
                         MissionMode mode, uint64_t seed);

void writeMetricsCsv(std::ostream& os, const std::vector<MetricsRow>& rows);
void writeGpLogCsv(std::ostream& os, const std::vector<GpLogRow>& rows);
void writeDecisionsCsv(std::ostream& os,
                       const std::vector<DecisionLogRow>& rows);

extern const char* const kMetricsCsvHeader;
extern const char* const kGpLogCsvHeader;
extern const char* const kDecisionsCsvHeader;
extern const char* const kSummaryCsvHeader;
extern const char* const kBenchCsvHeader;

struct CompareRow {
  std::string mode;
  std::string metric;
  double mean = 0.0;
  double stddev = 0.0;
};

struct PerSeedComparison {
  uint64_t seed = 0;
  bool success_asymp = false;
  bool success_bayes = false;
  double time_asymp = -1.0;
  double time_bayes = -1.0;
};

/// Runs both modes over shared seeds (one generated world per seed) and
/// aggregates mission time plus per-phase computation, with time-averaged
/// totals per 5% coverage bucket appended.
std::vector<CompareRow> compareModes(
    WorldKind kind, double extent, const MissionConfig& config, int n_seeds,
    std::vector<PerSeedComparison>* per_seed = nullptr);

void writeSummaryCsv(std::ostream& os, const std::vector<CompareRow>& rows);

}  // namespace explore
