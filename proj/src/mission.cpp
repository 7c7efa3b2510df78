#include "explore/mission.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace explore {

namespace {

using Clock = std::chrono::steady_clock;

int64_t usSince(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() -
                                                               start)
      .count();
}

}  // namespace

SensorModelConfig MissionConfig::scanModelConfig() const {
  SensorModelConfig cfg = sensor;
  cfg.max_range_m = std::min(sensor.max_range_m, scan_range);
  const int f = std::max(scan_density_factor, 1);
  cfg.az_step_rad = sensor.az_step_rad / f;
  cfg.el_step_rad = sensor.el_step_rad / f;
  cfg.az_offset_rad = 0.5 * cfg.az_step_rad;
  cfg.el_offset_rad = 0.5 * cfg.el_step_rad;
  return cfg;
}

namespace {

double parseDouble(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    while (pos < value.size() && std::isspace(value[pos])) ++pos;
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config key '" + key + "': bad number '" +
                             value + "'");
  }
}

int parseInt(const std::string& key, const std::string& value) {
  const double v = parseDouble(key, value);
  if (v != std::floor(v)) {
    throw std::runtime_error("config key '" + key + "': expected integer");
  }
  return static_cast<int>(v);
}

bool parseBool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::runtime_error("config key '" + key + "': expected true/false");
}

std::string trimmed(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  size_t b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

}  // namespace

MissionConfig parseConfig(std::istream& is, MissionConfig base) {
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trimmed(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": expected 'key = value'");
    }
    const std::string key = trimmed(line.substr(0, eq));
    const std::string value = trimmed(line.substr(eq + 1));

    if (key == "map.resolution_m") {
      base.map_resolution = parseDouble(key, value);
    } else if (key == "map.p_hit") {
      base.occupancy.p_hit = parseDouble(key, value);
    } else if (key == "map.p_miss") {
      base.occupancy.p_miss = parseDouble(key, value);
    } else if (key == "map.p_clamp_min") {
      base.occupancy.p_clamp_min = parseDouble(key, value);
    } else if (key == "map.p_clamp_max") {
      base.occupancy.p_clamp_max = parseDouble(key, value);
    } else if (key == "map.occupancy_threshold") {
      base.occupancy.occupancy_threshold = parseDouble(key, value);
    } else if (key == "sensor.max_range_m") {
      base.sensor.max_range_m = parseDouble(key, value);
    } else if (key == "sensor.az_span_rad") {
      base.sensor.az_span_rad = parseDouble(key, value);
    } else if (key == "sensor.el_span_rad") {
      base.sensor.el_span_rad = parseDouble(key, value);
    } else if (key == "sensor.az_step_rad") {
      base.sensor.az_step_rad = parseDouble(key, value);
    } else if (key == "sensor.el_step_rad") {
      base.sensor.el_step_rad = parseDouble(key, value);
    } else if (key == "frontier.clear_radius_m") {
      base.frontier_clear_radius = parseDouble(key, value);
    } else if (key == "cluster.bandwidth_m") {
      base.cluster.bandwidth = parseDouble(key, value);
    } else if (key == "cluster.eps_m") {
      base.cluster.convergence_eps = parseDouble(key, value);
    } else if (key == "cluster.max_iters") {
      base.cluster.max_iters = parseInt(key, value);
    } else if (key == "cluster.merge_radius_m") {
      base.cluster.merge_radius = parseDouble(key, value);
    } else if (key == "gain.lambda_g") {
      base.gain.lambda_g = parseDouble(key, value);
    } else if (key == "gain.cube_half_edge_m") {
      base.gain.cube_half_edge = parseDouble(key, value);
    } else if (key == "gain.mode") {
      if (value == "asprinted") {
        base.gain.gain_mode = GainMode::AsPrinted;
      } else if (value == "attenuating") {
        base.gain.gain_mode = GainMode::Attenuating;
      } else {
        throw std::runtime_error(
            "config key 'gain.mode': expected asprinted|attenuating");
      }
    } else if (key == "gp.sigma_f2") {
      base.gp.sigma_f2 = parseDouble(key, value);
    } else if (key == "gp.length_scale") {
      base.gp.length_scale = parseDouble(key, value);
    } else if (key == "gp.sigma_n2") {
      base.gp.sigma_n2 = parseDouble(key, value);
    } else if (key == "gp.window") {
      base.gp.window = parseInt(key, value);
    } else if (key == "plan.inflation_m") {
      base.plan_inflation = parseDouble(key, value);
    } else if (key == "plan.allow_unknown") {
      base.plan_allow_unknown = parseBool(key, value);
    } else if (key == "plan.goal_switch_m") {
      base.plan_goal_switch = parseDouble(key, value);
    } else if (key == "sim.tick_dt_s") {
      base.tick_dt = parseDouble(key, value);
    } else if (key == "sim.scan_every_ticks") {
      base.scan_every_ticks = parseInt(key, value);
    } else if (key == "sim.v_max_mps") {
      base.v_max = parseDouble(key, value);
    } else if (key == "sim.z_max_m") {
      base.z_max = parseDouble(key, value);
    } else if (key == "sim.noise_sigma_m") {
      base.noise_sigma = parseDouble(key, value);
    } else if (key == "sim.scan_range_m") {
      base.scan_range = parseDouble(key, value);
    } else if (key == "sim.scan_density_factor") {
      base.scan_density_factor = parseInt(key, value);
    } else if (key == "mission.success_threshold") {
      base.success_threshold = parseDouble(key, value);
    } else if (key == "mission.max_sim_time_s") {
      base.max_sim_time = parseDouble(key, value);
    } else if (key == "mission.stop_on_success") {
      base.stop_on_success = parseBool(key, value);
    } else {
      throw std::runtime_error("unknown config key: " + key);
    }
  }
  if (base.success_threshold <= 0.0 || base.success_threshold > 1.0) {
    throw std::runtime_error(
        "config key 'mission.success_threshold': must be in (0,1]");
  }
  return base;
}

MissionConfig parseConfigFile(const std::string& path, MissionConfig base) {
  std::ifstream is(path);
  if (!is) {
    throw std::runtime_error("cannot open config file: " + path);
  }
  return parseConfig(is, base);
}

namespace {

Vec3 pickStart(const WorldModel& world, uint64_t seed) {
  const Vec3 center = world.bounds().center();
  Vec3 start(center.x(), center.y(), 1.0);
  std::mt19937 rng(static_cast<uint32_t>(seed * 2654435761u + 17));
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  for (int attempt = 0; attempt < 32; ++attempt) {
    const Vec3 candidate(center.x() + jitter(rng), center.y() + jitter(rng),
                         1.0);
    if (!world.occupiedAt(candidate)) return candidate;
  }
  return start;
}

struct SafetyAudit {
  size_t n_false_free = 0;
  size_t n_false_occupied = 0;
};

SafetyAudit auditMapAgainstWorld(const WorldModel& world,
                                 const OccupancyOctree& map) {
  SafetyAudit audit;
  const GridFrame& frame = world.frame();
  for (int32_t x = 0; x < frame.nx; ++x) {
    for (int32_t y = 0; y < frame.ny; ++y) {
      for (int32_t z = 0; z < frame.nz; ++z) {
        const VoxelKey k{x, y, z};
        const OccupancyState s = map.stateAt(frame.centerOf(k));
        if (s == OccupancyState::Free && world.occupied(k)) {
          ++audit.n_false_free;
        } else if (s == OccupancyState::Occupied && !world.occupied(k)) {
          ++audit.n_false_occupied;
        }
      }
    }
  }
  return audit;
}

}  // namespace

MissionResult runMission(const WorldModel& world, const MissionConfig& config,
                         MissionMode mode, uint64_t seed) {
  MissionResult result;
  const double res = config.map_resolution;
  OccupancyOctree map(world.bounds(), res, config.occupancy);
  map.reserve(static_cast<size_t>(world.frame().nx) * world.frame().ny *
              world.frame().nz / 2);
  FrontierStore frontiers(config.frontier_clear_radius);
  auto gp = std::make_shared<GainRegressor>(config.gp);
  const SensorModel forward_model(config.sensor);
  const SensorModel scan_model(config.scanModelConfig());
  const GainSource source = mode == MissionMode::AsympBayes
                                ? GainSource::Gp
                                : GainSource::Deterministic;
  const ExecMode exec = config.exec;

  RobotState robot;
  robot.position = pickStart(world, seed);
  robot.v_max = config.v_max;
  robot.tick_dt = config.tick_dt;
  result.start_position = robot.position;

  std::optional<CandidateViewpoint> goal;
  std::optional<Path> path;
  double progress = 0.0;
  bool near_dispatch_done = false;  // one re-selection per goal approach
  // Set when a freshly mapped obstacle lands inside the inflation ball
  // around the robot: planning is impossible until the robot hops to the
  // nearest voxel with full clearance, moving only through known-free space.
  std::optional<Vec3> escape_target;
  bool crossed = false;
  result.end = MissionEnd::Timeout;

  auto tryEscape = [&]() -> bool {
    PlanRequest strict;
    strict.inflation_radius = config.plan_inflation;
    strict.allow_unknown = config.plan_allow_unknown;
    strict.max_z = config.z_max;
    const auto start_key = map.tryKeyAt(robot.position);
    if (!start_key || isTraversable(map, *start_key, strict)) return false;
    const KeyRange r = map.rangeForBox(Aabb::cube(robot.position, 2.0));
    double best_d2 = std::numeric_limits<double>::infinity();
    std::optional<Vec3> best;
    for (int32_t x = r.lo.x; x <= r.hi.x; ++x) {
      for (int32_t y = r.lo.y; y <= r.hi.y; ++y) {
        for (int32_t z = r.lo.z; z <= r.hi.z; ++z) {
          const VoxelKey k{x, y, z};
          if (!isTraversable(map, k, strict)) continue;
          const Vec3 center = map.centerOf(k);
          const double d2 = (center - robot.position).squaredNorm();
          if (d2 >= best_d2 || d2 < 1e-12) continue;
          bool line_free = true;
          for (const VoxelKey& lk : map.traverseRay(robot.position, center)) {
            if (map.stateOf(lk) != OccupancyState::Free) {
              line_free = false;
              break;
            }
          }
          if (!line_free) continue;
          best_d2 = d2;
          best = center;
        }
      }
    }
    if (!best) return false;
    escape_target = best;
    goal.reset();
    path.reset();
    progress = 0.0;
    near_dispatch_done = false;
    return true;
  };

  const int64_t max_ticks =
      config.tick_dt > 0.0
          ? static_cast<int64_t>(
                std::ceil(config.max_sim_time / config.tick_dt - 1e-9))
          : 0;

  for (int64_t tick = 0;; ++tick) {
    const double sim_time = tick * config.tick_dt;
    bool mission_over = false;

    if (tick % config.scan_every_ticks == 0) {
      const SensorPose pose{robot.position, 0.0};
      const ScanInput scan =
          simulateScan(world, scan_model, pose, exec, config.noise_sigma,
                       seed * 1000003ull + static_cast<uint64_t>(tick));

      BoxCounts feats;
      double predicted = 0.0;
      int64_t t_gp_us = 0;
      if (mode == MissionMode::AsympBayes) {
        feats = map.countStatesInBox(pose.position, config.gain.cube_half_edge,
                                     exec);
        const auto t0 = Clock::now();
        predicted = gp->predict(Vec3(static_cast<double>(feats.n_free),
                                     static_cast<double>(feats.n_occupied),
                                     static_cast<double>(feats.n_unknown)));
        t_gp_us = usSince(t0);
      }

      const UpdateReport report =
          processScan(map, frontiers, forward_model, scan, exec);
      ++result.n_updates;

      if (mode == MissionMode::AsympBayes) {
        const auto t0 = Clock::now();
        gp->observe(Vec3(static_cast<double>(feats.n_free),
                         static_cast<double>(feats.n_occupied),
                         static_cast<double>(feats.n_unknown)),
                    report.info_gain);
        t_gp_us += usSince(t0);
        result.gp_update_us.push_back(t_gp_us);
        result.gp_log.push_back(
            {tick, feats, report.info_gain, predicted});
      }

      const double cov = coverage(world, map);
      result.final_coverage = cov;
      result.peak_frontiers = std::max(result.peak_frontiers, frontiers.size());

      MetricsRow row;
      row.tick = tick;
      row.sim_time_s = sim_time;
      row.coverage_pct = cov * 100.0;
      row.n_frontiers = frontiers.size();
      row.entropy_bits = report.entropy_after;
      row.info_gain_bits = report.info_gain;
      row.t_map_us = report.t_map_us;
      row.t_frontier_us = report.t_frontier_us;
      row.chosen = goal ? goal->position : robot.position;

      if (cov >= config.success_threshold && !crossed) {
        crossed = true;
        result.success = true;
        result.sim_time_to_threshold = sim_time;
        if (config.stop_on_success) {
          result.end = MissionEnd::Success;
          mission_over = true;
        }
      }

      if (!mission_over && !escape_target) {
        const bool path_done = path && progress >= path->length - 1e-9;
        const bool near_goal =
            goal && (robot.position - goal->position).norm() <=
                        config.plan_goal_switch;
        const bool need_goal =
            !goal || path_done || (near_goal && !near_dispatch_done);
        if (need_goal) {
          RankTiming timing;
          const auto ranked =
              rankCandidates(map, frontiers, robot.position, source,
                             config.gain, config.cluster, gp.get(), exec,
                             &timing);
          row.t_cluster_us = timing.t_cluster_us;
          row.t_gain_us = timing.t_gain_us;

          // A candidate the robot already stands on offers no new vantage;
          // skip anything inside the goal-switch radius when adopting.
          std::vector<const CandidateViewpoint*> viable;
          viable.reserve(ranked.size());
          for (const CandidateViewpoint& cand : ranked) {
            if ((cand.position - robot.position).norm() >
                config.plan_goal_switch) {
              viable.push_back(&cand);
            }
          }

          if (ranked.empty()) {
            if (frontiers.empty()) {
              result.end = MissionEnd::FrontierExhaustion;
              mission_over = true;
            } else if (!tryEscape()) {
              result.end = MissionEnd::Unreachable;
              mission_over = true;
            }
          } else if (!viable.empty() && goal && path &&
                     (viable.front()->position - goal->position).norm() <
                         1e-9 &&
                     progress < path->length - 1e-9) {
            // Same target as before: keep walking the current path to its
            // end instead of replanning in place.
            near_dispatch_done = true;
          } else {
            const auto t_plan0 = Clock::now();
            bool planned = false;
            auto tryGoal = [&](const Vec3& target, int cluster_size,
                               const CandidateViewpoint* cand) {
              PlanRequest req;
              req.start = robot.position;
              req.goal = target;
              req.goal.z() = std::clamp(req.goal.z(),
                                        world.bounds().min.z() + 0.5 * res,
                                        config.z_max);
              req.inflation_radius = config.plan_inflation;
              req.allow_unknown = config.plan_allow_unknown;
              req.max_z = config.z_max;
              const PlanResult pr = plan(map, req);
              if (!pr.ok()) return false;
              result.n_inflation_violations += pr.inflation_violations;
              if (cand != nullptr) {
                goal = *cand;
              } else {
                CandidateViewpoint direct;
                direct.position = target;
                direct.cluster_size = cluster_size;
                goal = direct;
              }
              path = pr.path;
              progress = 0.0;
              near_dispatch_done = false;
              result.decision_log.push_back({tick, ranked.size(),
                                             goal->position, goal->info,
                                             goal->gain, source});
              return true;
            };
            for (const CandidateViewpoint* cand : viable) {
              if (tryGoal(cand->position, cand->cluster_size, cand)) {
                planned = true;
                break;
              }
            }
            if (!planned) {
              // No reachable cluster center: try frontiers directly, the
              // nearest few plus a spread across the whole set.
              std::vector<Vec3> points = frontiers.snapshot();
              std::sort(points.begin(), points.end(),
                        [&](const Vec3& a, const Vec3& b) {
                          return (a - robot.position).squaredNorm() <
                                 (b - robot.position).squaredNorm();
                        });
              std::vector<Vec3> attempts;
              const size_t stride =
                  std::max<size_t>(1, points.size() / 16);
              for (size_t i = 0; i < points.size() && attempts.size() < 8;
                   ++i) {
                attempts.push_back(points[i]);
              }
              for (size_t i = 8; i < points.size() && attempts.size() < 24;
                   i += stride) {
                attempts.push_back(points[i]);
              }
              for (const Vec3& p : attempts) {
                if ((p - robot.position).norm() <= config.plan_goal_switch) {
                  continue;
                }
                if (tryGoal(p, 1, nullptr)) {
                  planned = true;
                  break;
                }
              }
              if (!planned && !tryEscape()) {
                result.end = MissionEnd::Unreachable;
                mission_over = true;
              }
            }
            row.t_plan_us = usSince(t_plan0);
          }
        }
      }

      row.chosen = goal ? goal->position : robot.position;
      result.timeline.push_back(row);
    }

    if (mission_over) break;
    if (escape_target) {
      const Vec3 delta = *escape_target - robot.position;
      const double step = robot.v_max * robot.tick_dt;
      if (delta.norm() <= step) {
        robot.position = *escape_target;
        escape_target.reset();
      } else {
        robot.position += delta.normalized() * step;
      }
    } else if (path) {
      robot = stepRobot(robot, *path, progress);
    }
    if (tick + 1 > max_ticks) {
      result.end = crossed ? MissionEnd::Success : MissionEnd::Timeout;
      break;
    }
  }

  result.final_frontiers = frontiers.size();
  const SafetyAudit audit = auditMapAgainstWorld(world, map);
  result.n_false_free = audit.n_false_free;
  result.n_false_occupied = audit.n_false_occupied;
  if (config.keep_final_state) {
    result.final_map = std::make_shared<OccupancyOctree>(std::move(map));
    result.final_gp = gp;
  }
  return result;
}

const char* const kMetricsCsvHeader =
    "tick,sim_time_s,coverage_pct,n_frontiers,entropy_bits,info_gain_bits,"
    "t_map_us,t_frontier_us,t_cluster_us,t_gain_us,t_plan_us,chosen_x,"
    "chosen_y,chosen_z";
const char* const kGpLogCsvHeader =
    "tick,n_free,n_occupied,n_unknown,observed_gain_bits,predicted_gain_bits";
const char* const kDecisionsCsvHeader =
    "tick,n_candidates,chosen_x,chosen_y,chosen_z,info,gain,source";
const char* const kSummaryCsvHeader = "mode,metric,mean,std";
const char* const kBenchCsvHeader = "n_frontiers,changed_cells,t_frontier_us";

void writeMetricsCsv(std::ostream& os, const std::vector<MetricsRow>& rows) {
  os << kMetricsCsvHeader << '\n';
  for (const MetricsRow& r : rows) {
    os << r.tick << ',' << r.sim_time_s << ',' << r.coverage_pct << ','
       << r.n_frontiers << ',' << r.entropy_bits << ',' << r.info_gain_bits
       << ',' << r.t_map_us << ',' << r.t_frontier_us << ',' << r.t_cluster_us
       << ',' << r.t_gain_us << ',' << r.t_plan_us << ',' << r.chosen.x()
       << ',' << r.chosen.y() << ',' << r.chosen.z() << '\n';
  }
}

void writeGpLogCsv(std::ostream& os, const std::vector<GpLogRow>& rows) {
  os << kGpLogCsvHeader << '\n';
  for (const GpLogRow& r : rows) {
    os << r.tick << ',' << r.features.n_free << ',' << r.features.n_occupied
       << ',' << r.features.n_unknown << ',' << r.observed_gain_bits << ','
       << r.predicted_gain_bits << '\n';
  }
}

void writeDecisionsCsv(std::ostream& os,
                       const std::vector<DecisionLogRow>& rows) {
  os << kDecisionsCsvHeader << '\n';
  for (const DecisionLogRow& r : rows) {
    os << r.tick << ',' << r.n_candidates << ',' << r.chosen.x() << ','
       << r.chosen.y() << ',' << r.chosen.z() << ',' << r.info << ','
       << r.gain << ','
       << (r.source == GainSource::Gp ? "gp" : "deterministic") << '\n';
  }
}

namespace {

struct Stats {
  double mean = 0.0;
  double stddev = 0.0;
};

Stats statsOf(const std::vector<double>& v) {
  Stats s;
  if (v.empty()) return s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  double acc = 0.0;
  for (double x : v) acc += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(acc / static_cast<double>(v.size()));
  return s;
}

}  // namespace

std::vector<CompareRow> compareModes(
    WorldKind kind, double extent, const MissionConfig& config, int n_seeds,
    std::vector<PerSeedComparison>* per_seed) {
  if (n_seeds < 2) {
    throw std::invalid_argument("compareModes: need at least 2 seeds");
  }
  struct ModeAccum {
    std::vector<double> time_to_threshold;
    std::vector<double> success;
    std::vector<double> t_map, t_frontier, t_cluster, t_gain, t_plan;
    std::map<int, std::vector<double>> bucket_totals;  // 5% coverage buckets
  };
  ModeAccum accum[2];
  const MissionMode modes[2] = {MissionMode::Asymp, MissionMode::AsympBayes};
  const char* names[2] = {"asymp", "asymp_bayes"};

  if (per_seed != nullptr) per_seed->clear();
  for (int s = 0; s < n_seeds; ++s) {
    const WorldModel world = generateWorld(kind, extent, s,
                                           config.map_resolution);
    PerSeedComparison row;
    row.seed = s;
    for (int m = 0; m < 2; ++m) {
      const MissionResult r = runMission(world, config, modes[m], s);
      ModeAccum& a = accum[m];
      a.success.push_back(r.success ? 1.0 : 0.0);
      if (r.success) a.time_to_threshold.push_back(r.sim_time_to_threshold);
      std::vector<double> map_us, frontier_us, cluster_us, gain_us, plan_us;
      std::map<int, std::vector<double>> buckets;
      for (const MetricsRow& t : r.timeline) {
        map_us.push_back(t.t_map_us);
        frontier_us.push_back(t.t_frontier_us);
        cluster_us.push_back(t.t_cluster_us);
        gain_us.push_back(t.t_gain_us);
        plan_us.push_back(t.t_plan_us);
        const int bucket =
            std::min(95, static_cast<int>(t.coverage_pct / 5.0) * 5);
        buckets[bucket].push_back(t.t_map_us + t.t_frontier_us +
                                  t.t_cluster_us + t.t_gain_us + t.t_plan_us);
      }
      a.t_map.push_back(statsOf(map_us).mean);
      a.t_frontier.push_back(statsOf(frontier_us).mean);
      a.t_cluster.push_back(statsOf(cluster_us).mean);
      a.t_gain.push_back(statsOf(gain_us).mean);
      a.t_plan.push_back(statsOf(plan_us).mean);
      for (const auto& [bucket, vals] : buckets) {
        a.bucket_totals[bucket].push_back(statsOf(vals).mean);
      }
      if (m == 0) {
        row.success_asymp = r.success;
        row.time_asymp = r.sim_time_to_threshold;
      } else {
        row.success_bayes = r.success;
        row.time_bayes = r.sim_time_to_threshold;
      }
    }
    if (per_seed != nullptr) per_seed->push_back(row);
  }

  std::vector<CompareRow> rows;
  for (int m = 0; m < 2; ++m) {
    const ModeAccum& a = accum[m];
    auto push = [&](const std::string& metric, const std::vector<double>& v) {
      const Stats s = statsOf(v);
      rows.push_back({names[m], metric, s.mean, s.stddev});
    };
    push("sim_time_to_threshold_s", a.time_to_threshold);
    push("success_rate", a.success);
    push("t_map_us", a.t_map);
    push("t_frontier_us", a.t_frontier);
    push("t_cluster_us", a.t_cluster);
    push("t_gain_us", a.t_gain);
    push("t_plan_us", a.t_plan);
    for (const auto& [bucket, vals] : a.bucket_totals) {
      char name[48];
      std::snprintf(name, sizeof(name), "t_update_us_cov%02d", bucket);
      push(name, vals);
    }
  }
  return rows;
}

void writeSummaryCsv(std::ostream& os, const std::vector<CompareRow>& rows) {
  os << kSummaryCsvHeader << '\n';
  for (const CompareRow& r : rows) {
    os << r.mode << ',' << r.metric << ',' << r.mean << ',' << r.stddev
       << '\n';
  }
}

}  // namespace explore
