#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace explore {

struct FrontierBenchRow {
  size_t n_frontiers = 0;
  size_t changed_cells = 0;
  int64_t t_frontier_us = 0;
};

/// Measures the frontier maintenance pass with the two cost drivers
/// controlled independently: the store is seeded directly to the requested
/// size, and before every timed pass the map receives `changed_cells` fresh
/// voxel updates in a region disjoint from the seeded frontiers. Each
/// (size, factor) pair contributes `reps` rows; changed_cells =
/// base_changed * factor. Timing runs are pinned to one thread.
std::vector<FrontierBenchRow> benchFrontier(
    const std::vector<size_t>& sizes, const std::vector<double>& c_factors,
    int reps = 20, size_t base_changed = 2000);

void writeBenchCsv(std::ostream& os, const std::vector<FrontierBenchRow>& rows);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Least-squares line fit with the coefficient of determination.
LinearFit fitLinear(const std::vector<double>& x, const std::vector<double>& y);

double medianOf(std::vector<double> values);

/// Median t_frontier_us over rows matching (n_frontiers, changed_cells).
double medianBenchTime(const std::vector<FrontierBenchRow>& rows,
                       size_t n_frontiers, size_t changed_cells);

}  // namespace explore
