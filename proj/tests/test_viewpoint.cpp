#include "explore/viewpoint.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace explore;

namespace {

std::vector<Vec3> gaussianCluster(std::mt19937& rng, const Vec3& mean,
                                  double sigma, int n) {
  std::normal_distribution<double> g(0.0, sigma);
  std::vector<Vec3> pts;
  for (int i = 0; i < n; ++i) {
    pts.emplace_back(mean.x() + g(rng), mean.y() + g(rng), mean.z() + g(rng));
  }
  return pts;
}

}  // namespace

TEST_CASE("mean_shift") {
  MeanShiftParams params;

  SUBCASE("single point is its own mode") {
    const auto centers = meanShift({{1, 2, 3}}, params);
    REQUIRE(centers.size() == 1);
    CHECK((centers[0] - Vec3(1, 2, 3)).norm() < 1e-12);
  }

  SUBCASE("empty input yields empty output") {
    CHECK(meanShift({}, params).empty());
  }

  SUBCASE("coincident points collapse to one center") {
    const std::vector<Vec3> pts(7, Vec3(2, 2, 2));
    const auto centers = meanShift(pts, params);
    REQUIRE(centers.size() == 1);
    CHECK((centers[0] - Vec3(2, 2, 2)).norm() < 1e-12);
  }

  SUBCASE("two tight groups are recovered near their means") {
    std::mt19937 rng(17);
    auto pts = gaussianCluster(rng, {0, 0, 0}, 0.05, 30);
    const auto more = gaussianCluster(rng, {10, 10, 10}, 0.05, 30);
    pts.insert(pts.end(), more.begin(), more.end());
    const auto centers = meanShift(pts, params);
    REQUIRE(centers.size() == 2);
    for (const Vec3& mean : {Vec3(0, 0, 0), Vec3(10, 10, 10)}) {
      double best = 1e9;
      for (const Vec3& c : centers) best = std::min(best, (c - mean).norm());
      CHECK(best < 0.1);
    }
  }

  SUBCASE("centers stay within the input hull and never outnumber inputs") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::vector<Vec3> pts;
    for (int i = 0; i < 60; ++i) pts.emplace_back(u(rng), u(rng), u(rng));
    const auto centers = meanShift(pts, params);
    CHECK(centers.size() <= pts.size());
    Vec3 lo = pts[0], hi = pts[0];
    for (const Vec3& p : pts) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    for (const Vec3& c : centers) {
      for (int i = 0; i < 3; ++i) {
        CHECK(c[i] >= lo[i] - 1e-9);
        CHECK(c[i] <= hi[i] + 1e-9);
      }
    }
  }

  SUBCASE("shift magnitude settles monotonically") {
    std::mt19937 rng(31);
    auto pts = gaussianCluster(rng, {0, 0, 0}, 0.4, 40);
    const auto more = gaussianCluster(rng, {12, 0, 0}, 0.4, 40);
    pts.insert(pts.end(), more.begin(), more.end());
    std::vector<double> trace;
    meanShiftWithTrace(pts, params, &trace);
    for (size_t i = 4; i < trace.size(); ++i) {
      CHECK(trace[i] <= trace[i - 1] + 1e-9);
    }
  }
}

TEST_CASE("deterministic gain counts unknown voxels") {
  OccupancyOctree map({{0, 0, 0}, {8, 8, 8}}, 0.4);
  GainParams params;
  params.cube_half_edge = 1.0;  // 5x5x5 voxels
  const Vec3 center = map.centerOf(VoxelKey{10, 10, 10});

  CHECK(deterministicGain(map, center, params) == 125);

  // Fully explored cube.
  for (int32_t x = 8; x <= 12; ++x) {
    for (int32_t y = 8; y <= 12; ++y) {
      for (int32_t z = 8; z <= 12; ++z) {
        map.updateNode(VoxelKey{x, y, z}, false);
      }
    }
  }
  CHECK(deterministicGain(map, center, params) == 0);

  // Half-carved region matches the oracle count.
  OccupancyOctree half({{0, 0, 0}, {8, 8, 8}}, 0.4);
  std::mt19937 rng(5);
  std::uniform_int_distribution<int32_t> coord(6, 14);
  for (int i = 0; i < 60; ++i) {
    half.updateNode(VoxelKey{coord(rng), coord(rng), coord(rng)}, false);
  }
  CHECK(deterministicGain(half, center, params) ==
        oracles::boxCountsOracle(half, center, 1.0).n_unknown);
}

TEST_CASE("exploration gain") {
  GainParams params;
  params.lambda_g = 0.5;

  SUBCASE("zero distance leaves the information measure unchanged") {
    params.gain_mode = GainMode::AsPrinted;
    CHECK(explorationGain(10.0, {1, 1, 1}, {1, 1, 1}, params) ==
          doctest::Approx(10.0));
    params.gain_mode = GainMode::Attenuating;
    CHECK(explorationGain(10.0, {1, 1, 1}, {1, 1, 1}, params) ==
          doctest::Approx(10.0));
  }

  SUBCASE("as-printed form rewards distance") {
    params.gain_mode = GainMode::AsPrinted;
    CHECK(explorationGain(10.0, {0, 0, 0}, {2, 0, 0}, params) ==
          doctest::Approx(27.18281828).epsilon(1e-8));
  }

  SUBCASE("attenuating form penalizes distance") {
    params.gain_mode = GainMode::Attenuating;
    CHECK(explorationGain(10.0, {0, 0, 0}, {2, 0, 0}, params) ==
          doctest::Approx(10.0 * std::exp(-1.0)).epsilon(1e-12));
  }
}

TEST_CASE("select_best") {
  OccupancyOctree map({{0, 0, 0}, {12, 12, 8}}, 0.4);
  GainParams gain;
  MeanShiftParams cluster;

  SUBCASE("no frontiers means exploration is complete") {
    FrontierStore store(1.0);
    CHECK(!selectBest(map, store, {1, 1, 1}, GainSource::Deterministic, gain,
                      cluster));
  }

  SUBCASE("a single cluster is selected at its center") {
    FrontierStore store(1.0);
    for (int i = 0; i < 4; ++i) {
      store.seed(VoxelKey{10 + i, 10, 5},
                 map.centerOf(VoxelKey{10 + i, 10, 5}));
    }
    const auto best =
        selectBest(map, store, {1, 1, 1}, GainSource::Deterministic, gain,
                   cluster);
    REQUIRE(best.has_value());
    CHECK((best->position - Vec3(4.8, 4.2, 2.2)).norm() < 0.5);
    CHECK(best->cluster_size == 4);
  }

  SUBCASE("equal information favors the nearer candidate when attenuating") {
    FrontierStore store(1.0);
    // Two far-apart single-frontier clusters whose gain cubes both lie
    // fully inside the unknown interior, so their counts are identical.
    store.seed(VoxelKey{8, 8, 8}, map.centerOf(VoxelKey{8, 8, 8}));
    store.seed(VoxelKey{22, 22, 8}, map.centerOf(VoxelKey{22, 22, 8}));
    gain.gain_mode = GainMode::Attenuating;
    const Vec3 robot(4.2, 4.2, 3.4);
    const auto best = selectBest(map, store, robot, GainSource::Deterministic,
                                 gain, cluster);
    REQUIRE(best.has_value());
    CHECK(best->features.n_unknown == 13 * 13 * 13);
    CHECK((best->position - map.centerOf(VoxelKey{8, 8, 8})).norm() < 1.0);
  }

  SUBCASE("rescaling every gain never changes the argmax") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(0.5, 10.0);
    std::uniform_real_distribution<double> scale_dist(0.1, 40.0);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> infos;
      std::vector<Vec3> positions;
      for (int i = 0; i < 6; ++i) {
        infos.push_back(u(rng));
        positions.emplace_back(u(rng), u(rng), u(rng) / 3.0);
      }
      const Vec3 robot(1, 1, 1);
      auto argmax = [&](double scale) {
        size_t best = 0;
        double best_gain = -1.0;
        for (size_t i = 0; i < infos.size(); ++i) {
          const double g =
              explorationGain(scale * infos[i], robot, positions[i], gain);
          if (g > best_gain) {
            best_gain = g;
            best = i;
          }
        }
        return best;
      };
      const double c = scale_dist(rng);
      CHECK(argmax(1.0) == argmax(c));
    }
  }
}
