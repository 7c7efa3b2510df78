#pragma once

#include "explore/exec.hpp"
#include "explore/geometry.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <deque>
#include <vector>

namespace explore {

struct GpHyperparams {
  double sigma_f2 = 1.0;      // signal variance, bits^2
  double length_scale = 0.3;  // in normalized feature space
  double sigma_n2 = 0.01;     // observation noise variance, bits^2
  int window = 200;           // sliding-window capacity W
};

/// Min/max normalization into the unit cube. Dimensions with equal bounds
/// map to 0.5 so a constant feature stays finite.
Vec3 normalizeFeatures(const Vec3& x, const Vec3& x_min, const Vec3& x_max);

/// Squared Exponential kernel over normalized features.
double seKernel(const Vec3& a, const Vec3& b, const GpHyperparams& hp);

/// Sliding-window Gaussian Process regressor mapping voxel-count features
/// (free, occupied, unknown) to observed entropy reduction. Each observe()
/// refits the model over the W most recent samples: bounds, mean, kernel
/// matrix and its Cholesky factor are all recomputed, so a prediction is a
/// single O(W) dot product against the cached weights.
class GainRegressor {
 public:
  explicit GainRegressor(const GpHyperparams& hp = {});

  const GpHyperparams& hyperparams() const { return hp_; }
  size_t size() const { return raw_x_.size(); }
  bool empty() const { return raw_x_.empty(); }
  double mean() const { return mu_; }
  Vec3 boundsMin() const { return x_min_; }
  Vec3 boundsMax() const { return x_max_; }

  /// FIFO insert of (features, observed gain); evicts the oldest sample
  /// beyond the window and refits.
  void observe(const Vec3& raw_features, double gain);

  /// Posterior predictive mean at the query features. Returns the prior
  /// mean (0) while the window is empty.
  double predict(const Vec3& raw_features) const;

  std::vector<double> predictBatch(const std::vector<Vec3>& raw_features,
                                   ExecMode mode = ExecMode::Serial) const;

  /// Kernel matrix of the current window (normalized features), without the
  /// noise term. Exposed for verification.
  Eigen::MatrixXd kernelMatrix() const;

 private:
  void refit();

  GpHyperparams hp_;
  std::deque<Vec3> raw_x_;
  std::deque<double> y_;
  Vec3 x_min_{0, 0, 0};
  Vec3 x_max_{0, 0, 0};
  double mu_ = 0.0;
  std::vector<Vec3> x_norm_;
  Eigen::VectorXd alpha_;  // (K + sigma_n^2 I)^-1 (y - mu 1)
};

}  // namespace explore
