#include "explore/frontier_bench.hpp"

#include "explore/frontier_store.hpp"
#include "explore/mission.hpp"
#include "explore/occupancy_octree.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace explore {

namespace {

using Clock = std::chrono::steady_clock;

}  // namespace

std::vector<FrontierBenchRow> benchFrontier(const std::vector<size_t>& sizes,
                                            const std::vector<double>& c_factors,
                                            int reps, size_t base_changed) {
  for (size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] < sizes[i - 1]) {
      throw std::invalid_argument("benchFrontier: sizes must be ascending");
    }
  }
#ifdef _OPENMP
  const int prev_threads = omp_get_max_threads();
  omp_set_num_threads(1);
#endif

  // 60 x 60 x 8 m at the default resolution: 150 x 150 x 20 voxels. Map
  // churn re-updates cells of a pre-populated region, so the number of
  // changed cells per update varies while the map itself stays the same
  // size; the seeded frontiers live in the other half of the volume and
  // stay unknown, keeping the store size constant across reps.
  const Aabb bounds{{0, 0, 0}, {60, 60, 8}};
  const double res = 0.4;
  const Vec3 robot(0.2, 0.2, 0.2);
  const int64_t churn_capacity = int64_t(75) * 150 * 20;
  auto churnKey = [&](int64_t i) {
    const int64_t idx = i % churn_capacity;
    return VoxelKey{static_cast<int32_t>(idx / (150 * 20)),
                    static_cast<int32_t>((idx / 20) % 150),
                    static_cast<int32_t>(idx % 20)};
  };

  std::vector<FrontierBenchRow> rows;
  rows.reserve(sizes.size() * c_factors.size() * reps);

  for (size_t size : sizes) {
    for (double factor : c_factors) {
      const size_t changed =
          static_cast<size_t>(std::llround(base_changed * factor));
      OccupancyOctree map(bounds, res);
      map.reserve(static_cast<size_t>(churn_capacity) + 1024);
      for (int64_t i = 0; i < churn_capacity; ++i) {
        map.updateNode(churnKey(i), false);
      }
      FrontierStore store(1.0);
      store.reserve(size);

      // Seed the store with unknown voxels in x >= 30 m.
      const int32_t x0 = 76, nx = 74, ny = 150, nz = 20;
      size_t seeded = 0;
      for (int32_t x = x0; x < x0 + nx && seeded < size; ++x) {
        for (int32_t y = 0; y < ny && seeded < size; ++y) {
          for (int32_t z = 0; z < nz && seeded < size; ++z) {
            const VoxelKey k{x, y, z};
            store.seed(k, map.centerOf(k));
            ++seeded;
          }
        }
      }
      if (seeded < size) {
        throw std::invalid_argument("benchFrontier: size exceeds seed region");
      }

      int64_t churn_cursor = 0;
      for (int rep = 0; rep < reps; ++rep) {
        for (size_t c = 0; c < changed; ++c) {
          map.updateNode(churnKey(churn_cursor++), false);
        }
        const auto t0 = Clock::now();
        const FrontierCorrection result = store.correct(map, robot);
        const int64_t us = std::chrono::duration_cast<std::chrono::microseconds>(
                               Clock::now() - t0)
                               .count();
        if (result.n_erased_known + result.n_erased_near != 0) {
          throw std::logic_error("benchFrontier: seeded frontiers were erased");
        }
        rows.push_back({size, changed, us});
      }
    }
  }

#ifdef _OPENMP
  omp_set_num_threads(prev_threads);
#endif
  return rows;
}

void writeBenchCsv(std::ostream& os,
                   const std::vector<FrontierBenchRow>& rows) {
  os << kBenchCsvHeader << '\n';
  for (const FrontierBenchRow& r : rows) {
    os << r.n_frontiers << ',' << r.changed_cells << ',' << r.t_frontier_us
       << '\n';
  }
}

LinearFit fitLinear(const std::vector<double>& x,
                    const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fitLinear: need >= 2 paired samples");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LinearFit fit;
  const double denom = n * sxx - sx * sx;
  fit.slope = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double mean_y = sy / n;
  for (size_t i = 0; i < x.size(); ++i) {
    const double pred = fit.slope * x[i] + fit.intercept;
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - mean_y) * (y[i] - mean_y);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

double medianOf(std::vector<double> values) {
  if (values.empty()) {
    throw std::invalid_argument("medianOf: empty");
  }
  std::sort(values.begin(), values.end());
  const size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

double medianBenchTime(const std::vector<FrontierBenchRow>& rows,
                       size_t n_frontiers, size_t changed_cells) {
  std::vector<double> matching;
  for (const FrontierBenchRow& r : rows) {
    if (r.n_frontiers == n_frontiers && r.changed_cells == changed_cells) {
      matching.push_back(static_cast<double>(r.t_frontier_us));
    }
  }
  return medianOf(std::move(matching));
}

}  // namespace explore
