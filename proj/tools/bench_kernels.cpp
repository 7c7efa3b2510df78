// Micro-benchmark comparing the serial reference implementations of the
// data-parallel kernels against their OpenMP counterparts.

#include "explore/map_updater.hpp"
#include "explore/mission.hpp"
#include "explore/sim_world.hpp"
#include "explore/viewpoint.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using Clock = std::chrono::steady_clock;
using explore::ExecMode;

double msBetween(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::milli>(b - a).count();
}

template <typename Fn>
double timeMs(int reps, Fn&& fn) {
  fn();  // warm caches before timing
  const auto t0 = Clock::now();
  for (int i = 0; i < reps; ++i) fn();
  return msBetween(t0, Clock::now()) / reps;
}

void printRow(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-28s %10.3f ms %10.3f ms %8.2fx\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
  const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
  const int reps = quick ? 3 : 10;
  const double extent = quick ? 12.0 : 20.0;

#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not enabled; parallel mode runs serially\n");
#endif
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel",
              "speedup");

  const explore::WorldModel world =
      explore::generateWorld(explore::WorldKind::Forest, extent, 7);
  explore::MissionConfig config;
  const explore::SensorModel scan_model(config.scanModelConfig());
  const explore::SensorModel forward_model(config.sensor);
  const explore::SensorPose pose{world.bounds().center(), 0.0};

  // simulate_scan
  {
    auto run = [&](ExecMode mode) {
      return timeMs(reps, [&] {
        explore::simulateScan(world, scan_model, pose, mode);
      });
    };
    printRow("simulate_scan", run(ExecMode::Serial), run(ExecMode::Parallel));
  }

  // Build a partially explored map for the map-query kernels.
  explore::OccupancyOctree map(world.bounds(), config.map_resolution,
                               config.occupancy);
  explore::FrontierStore frontiers(config.frontier_clear_radius);
  const explore::ScanInput scan =
      explore::simulateScan(world, scan_model, pose);
  explore::processScan(map, frontiers, forward_model, scan);

  // forward-model cast bundle
  {
    auto run = [&](ExecMode mode) {
      return timeMs(reps, [&] {
        explore::castSweepBundle(map, forward_model, pose, mode);
      });
    };
    printRow("cast_sweep_bundle", run(ExecMode::Serial),
             run(ExecMode::Parallel));
  }

  // box state counting
  {
    auto run = [&](ExecMode mode) {
      return timeMs(reps, [&] {
        explore::BoxCounts c =
            map.countStatesInBox(pose.position, extent / 2, mode);
        (void)c;
      });
    };
    printRow("count_states_in_box", run(ExecMode::Serial),
             run(ExecMode::Parallel));
  }

  // entropy summation
  {
    const explore::Aabb box = world.bounds();
    auto run = [&](ExecMode mode) {
      return timeMs(reps, [&] { explore::entropyInBox(map, box, mode); });
    };
    printRow("entropy_in_box", run(ExecMode::Serial), run(ExecMode::Parallel));
  }

  // mean shift
  {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, extent);
    std::vector<explore::Vec3> points(quick ? 300 : 800);
    for (auto& p : points) p = explore::Vec3(u(rng), u(rng), u(rng) / 5.0);
    explore::MeanShiftParams params;
    auto run = [&](ExecMode mode) {
      return timeMs(reps, [&] { explore::meanShift(points, params, mode); });
    };
    printRow("mean_shift", run(ExecMode::Serial), run(ExecMode::Parallel));
  }

  // GP batch prediction
  {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(0.0, 3000.0);
    explore::GainRegressor gp(config.gp);
    for (int i = 0; i < config.gp.window; ++i) {
      gp.observe(explore::Vec3(u(rng), u(rng), u(rng)), u(rng) / 100.0);
    }
    std::vector<explore::Vec3> queries(quick ? 64 : 256);
    for (auto& q : queries) q = explore::Vec3(u(rng), u(rng), u(rng));
    auto run = [&](ExecMode mode) {
      return timeMs(reps, [&] { gp.predictBatch(queries, mode); });
    };
    printRow("gp_predict_batch", run(ExecMode::Serial),
             run(ExecMode::Parallel));
  }

  return 0;
}
