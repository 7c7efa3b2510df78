#include "explore/gp_gain.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace explore;

TEST_CASE("feature normalization") {
  const Vec3 lo(0, 0, 0), hi(20, 40, 60);
  const Vec3 mid = normalizeFeatures({10, 20, 30}, lo, hi);
  CHECK((mid - Vec3(0.5, 0.5, 0.5)).norm() < 1e-12);
  CHECK((normalizeFeatures(lo, lo, hi) - Vec3(0, 0, 0)).norm() < 1e-12);

  // A constant dimension maps to the cube midpoint.
  const Vec3 degen = normalizeFeatures({5, 20, 30}, {5, 0, 0}, {5, 40, 60});
  CHECK(degen.x() == doctest::Approx(0.5));
}

TEST_CASE("squared exponential kernel") {
  GpHyperparams hp;
  CHECK(seKernel({0.2, 0.2, 0.2}, {0.2, 0.2, 0.2}, hp) ==
        doctest::Approx(1.0));
  // Distance of one length scale.
  const Vec3 a(0, 0, 0), b(hp.length_scale, 0, 0);
  CHECK(seKernel(a, b, hp) == doctest::Approx(0.6065306597).epsilon(1e-9));

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const Vec3 p(u(rng), u(rng), u(rng)), q(u(rng), u(rng), u(rng));
    CHECK(seKernel(p, q, hp) == seKernel(q, p, hp));
    CHECK(seKernel(p, q, hp) > 0.0);
    CHECK(seKernel(p, q, hp) <= hp.sigma_f2);
  }
}

TEST_CASE("observe maintains a FIFO window") {
  GpHyperparams hp;
  hp.window = 2;
  GainRegressor gp(hp);

  gp.observe({100, 0, 0}, 1.0);
  CHECK(gp.mean() == doctest::Approx(1.0));
  gp.observe({200, 0, 0}, 3.0);
  CHECK(gp.size() == 2);
  CHECK(gp.mean() == doctest::Approx(2.0));
  gp.observe({300, 0, 0}, 5.0);
  CHECK(gp.size() == 2);  // first sample evicted
  CHECK(gp.mean() == doctest::Approx(4.0));
  CHECK(gp.boundsMin().x() == doctest::Approx(200.0));
}

TEST_CASE("kernel matrix matches a brute-force pairwise build") {
  GpHyperparams hp;
  GainRegressor gp(hp);
  const std::vector<Vec3> xs = {{120, 30, 900}, {80, 45, 700}, {40, 80, 300}};
  const std::vector<double> ys = {4.0, 2.5, 1.0};
  for (size_t i = 0; i < xs.size(); ++i) gp.observe(xs[i], ys[i]);

  Vec3 lo = xs[0], hi = xs[0];
  for (const Vec3& x : xs) {
    lo = lo.cwiseMin(x);
    hi = hi.cwiseMax(x);
  }
  const Eigen::MatrixXd K = gp.kernelMatrix();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double expected = seKernel(normalizeFeatures(xs[i], lo, hi),
                                       normalizeFeatures(xs[j], lo, hi), hp);
      CHECK(K(i, j) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("predict") {
  GpHyperparams hp;

  SUBCASE("empty window returns the zero prior") {
    GainRegressor gp(hp);
    CHECK(gp.empty());
    CHECK(gp.predict({10, 10, 10}) == doctest::Approx(0.0));
  }

  SUBCASE("single observation predicts its own value everywhere") {
    GainRegressor gp(hp);
    gp.observe({50, 60, 70}, 5.0);
    CHECK(gp.predict({50, 60, 70}) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(gp.predict({999, 1, 2}) == doctest::Approx(5.0).epsilon(1e-12));
  }

  SUBCASE("near-noiseless regressor interpolates its training points") {
    GpHyperparams tight = hp;
    tight.sigma_n2 = 1e-12;
    GainRegressor gp(tight);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1000.0);
    std::vector<Vec3> xs;
    std::vector<double> ys;
    while (xs.size() < 8) {
      const Vec3 x(u(rng), u(rng), u(rng));
      bool distinct = true;
      for (const Vec3& prev : xs) {
        if ((prev - x).norm() < 150.0) distinct = false;
      }
      if (!distinct) continue;
      xs.push_back(x);
      ys.push_back(u(rng) / 100.0);
      gp.observe(xs.back(), ys.back());
    }
    for (size_t i = 0; i < xs.size(); ++i) {
      CHECK(gp.predict(xs[i]) == doctest::Approx(ys[i]).epsilon(1e-6));
    }
  }

  SUBCASE("matches the dense from-scratch solve") {
    GainRegressor gp(hp);
    std::mt19937 rng(19);
    std::uniform_real_distribution<double> u(0.0, 2000.0);
    std::vector<Vec3> xs;
    std::vector<double> ys;
    for (int i = 0; i < 30; ++i) {
      xs.emplace_back(u(rng), u(rng), u(rng));
      ys.push_back(u(rng) / 200.0);
      gp.observe(xs.back(), ys.back());
    }
    for (int q = 0; q < 10; ++q) {
      const Vec3 query(u(rng), u(rng), u(rng));
      CHECK(gp.predict(query) ==
            doctest::Approx(oracles::gpPredictOracle(xs, ys, query, hp))
                .epsilon(1e-8));
    }
  }

  SUBCASE("constant observations predict the constant") {
    GainRegressor gp(hp);
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> u(0.0, 500.0);
    for (int i = 0; i < 20; ++i) {
      gp.observe({u(rng), u(rng), u(rng)}, 7.25);
    }
    for (int q = 0; q < 10; ++q) {
      CHECK(gp.predict({u(rng), u(rng), u(rng)}) ==
            doctest::Approx(7.25).epsilon(1e-9));
    }
  }
}

TEST_CASE("hyperparameter validation") {
  GpHyperparams hp;
  hp.window = 0;
  CHECK_THROWS_AS(GainRegressor{hp}, std::invalid_argument);
  GainRegressor ok;
  CHECK_THROWS_AS(ok.observe({1, 2, 3}, std::nan("")), std::invalid_argument);
}
