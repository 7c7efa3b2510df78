// Command-line surface of the exploration engine: world generation, single
// missions with metrics output, the frontier-maintenance benchmark, and the
// two-mode comparison.

#include "explore/frontier_bench.hpp"
#include "explore/mission.hpp"
#include "explore/sim_world.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

explore::WorldKind parseKind(const std::string& kind) {
  if (kind == "forest") return explore::WorldKind::Forest;
  if (kind == "warehouse") return explore::WorldKind::Warehouse;
  if (kind == "room") return explore::WorldKind::Room;
  throw CLI::ValidationError("--kind", "expected forest|warehouse|room");
}

std::vector<size_t> parseSizeList(const std::string& csv) {
  std::vector<size_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(static_cast<size_t>(std::stoull(item)));
  }
  return out;
}

std::vector<double> parseDoubleList(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(std::stod(item));
  }
  return out;
}

std::ofstream openOut(const std::string& path) {
  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  return os;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frontier exploration engine"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a world file");
  std::string gen_kind = "forest";
  double gen_extent = 20.0;
  double gen_height = 4.0;
  uint64_t gen_seed = 1;
  std::string gen_out = "world.txt";
  gen->add_option("--kind", gen_kind, "forest|warehouse|room");
  gen->add_option("--extent", gen_extent, "side length, meters");
  gen->add_option("--height", gen_height, "world height, meters");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output world file")->required();

  // explore
  auto* exp = app.add_subcommand("explore", "Run one exploration mission");
  std::string exp_world, exp_config, exp_metrics, exp_gp_log, exp_decisions;
  std::string exp_mode = "asymp";
  uint64_t exp_seed = 1;
  exp->add_option("--world", exp_world, "world file")->required();
  exp->add_option("--config", exp_config, "config file (key = value)");
  exp->add_option("--mode", exp_mode, "asymp|asymp-bayes");
  exp->add_option("--seed", exp_seed, "mission seed");
  exp->add_option("--metrics", exp_metrics, "metrics CSV output")->required();
  exp->add_option("--gp-log", exp_gp_log, "regression-quality CSV output");
  exp->add_option("--decisions", exp_decisions,
                  "per-viewpoint-decision CSV output");

  // bench-frontier
  auto* bench = app.add_subcommand(
      "bench-frontier", "Benchmark frontier maintenance vs |F| and changed cells");
  std::string bench_sizes = "1000,10000,100000";
  std::string bench_cfactors = "1,10";
  int bench_reps = 20;
  std::string bench_out = "bench.csv";
  bench->add_option("--sizes", bench_sizes, "frontier set sizes, ascending");
  bench->add_option("--cfactors", bench_cfactors, "changed-cell multipliers");
  bench->add_option("--reps", bench_reps, "repetitions per configuration");
  bench->add_option("--out", bench_out, "output CSV")->required();

  // compare
  auto* cmp = app.add_subcommand("compare",
                                 "Run both modes over shared seeds");
  std::string cmp_kind = "forest";
  double cmp_extent = 20.0;
  std::string cmp_config;
  int cmp_seeds = 20;
  std::string cmp_out = "summary.csv";
  cmp->add_option("--kind", cmp_kind, "forest|warehouse|room");
  cmp->add_option("--extent", cmp_extent, "side length, meters");
  cmp->add_option("--config", cmp_config, "config file (key = value)");
  cmp->add_option("--seeds", cmp_seeds, "number of shared seeds")->required();
  cmp->add_option("--out", cmp_out, "output CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const explore::WorldModel world =
          explore::generateWorld(parseKind(gen_kind), gen_extent, gen_seed,
                                 0.4, gen_height);
      auto os = openOut(gen_out);
      explore::saveWorld(world, os);
      std::cout << "wrote " << gen_out << " (" << world.boxes().size()
                << " boxes, " << world.cylinders().size() << " cylinders)\n";
    } else if (*exp) {
      explore::MissionConfig config;
      if (!exp_config.empty()) {
        config = explore::parseConfigFile(exp_config);
      }
      explore::MissionMode mode;
      if (exp_mode == "asymp") {
        mode = explore::MissionMode::Asymp;
      } else if (exp_mode == "asymp-bayes") {
        mode = explore::MissionMode::AsympBayes;
      } else {
        throw std::runtime_error("--mode: expected asymp|asymp-bayes");
      }
      const explore::WorldModel world =
          explore::loadWorldFile(exp_world, config.map_resolution);
      const explore::MissionResult result =
          explore::runMission(world, config, mode, exp_seed);
      auto os = openOut(exp_metrics);
      explore::writeMetricsCsv(os, result.timeline);
      if (!exp_gp_log.empty()) {
        auto gs = openOut(exp_gp_log);
        explore::writeGpLogCsv(gs, result.gp_log);
      }
      if (!exp_decisions.empty()) {
        auto ds = openOut(exp_decisions);
        explore::writeDecisionsCsv(ds, result.decision_log);
      }
      std::cout << "mission " << (result.success ? "succeeded" : "failed")
                << ": coverage " << result.final_coverage * 100.0 << "% in "
                << result.timeline.size() << " updates";
      if (result.success) {
        std::cout << ", threshold at " << result.sim_time_to_threshold << " s";
      }
      std::cout << '\n';
    } else if (*bench) {
      const auto rows = explore::benchFrontier(
          parseSizeList(bench_sizes), parseDoubleList(bench_cfactors),
          bench_reps);
      auto os = openOut(bench_out);
      explore::writeBenchCsv(os, rows);
      std::cout << "wrote " << bench_out << " (" << rows.size() << " rows)\n";
    } else if (*cmp) {
      explore::MissionConfig config;
      if (!cmp_config.empty()) {
        config = explore::parseConfigFile(cmp_config);
      }
      std::vector<explore::PerSeedComparison> per_seed;
      const auto rows = explore::compareModes(parseKind(cmp_kind), cmp_extent,
                                              config, cmp_seeds, &per_seed);
      auto os = openOut(cmp_out);
      explore::writeSummaryCsv(os, rows);
      std::cout << "wrote " << cmp_out << '\n';
      for (const auto& s : per_seed) {
        std::cout << "seed " << s.seed << ": asymp "
                  << (s.success_asymp ? s.time_asymp : -1.0) << " s, bayes "
                  << (s.success_bayes ? s.time_bayes : -1.0) << " s\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
