#include "explore/gp_gain.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace explore {

Vec3 normalizeFeatures(const Vec3& x, const Vec3& x_min, const Vec3& x_max) {
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    const double span = x_max[i] - x_min[i];
    out[i] = span > 0.0 ? (x[i] - x_min[i]) / span : 0.5;
  }
  return out;
}

double seKernel(const Vec3& a, const Vec3& b, const GpHyperparams& hp) {
  const double d2 = (a - b).squaredNorm();
  return hp.sigma_f2 * std::exp(-d2 / (2.0 * hp.length_scale * hp.length_scale));
}

GainRegressor::GainRegressor(const GpHyperparams& hp) : hp_(hp) {
  if (hp.sigma_f2 <= 0.0 || hp.length_scale <= 0.0 || hp.sigma_n2 <= 0.0 ||
      hp.window < 1) {
    throw std::invalid_argument("GainRegressor: invalid hyperparameters");
  }
}

void GainRegressor::observe(const Vec3& raw_features, double gain) {
  if (!std::isfinite(gain)) {
    throw std::invalid_argument("GainRegressor::observe: gain must be finite");
  }
  raw_x_.push_back(raw_features);
  y_.push_back(gain);
  while (raw_x_.size() > static_cast<size_t>(hp_.window)) {
    raw_x_.pop_front();
    y_.pop_front();
  }
  refit();
}

void GainRegressor::refit() {
  const int n = static_cast<int>(raw_x_.size());
  x_min_ = raw_x_.front();
  x_max_ = raw_x_.front();
  for (const Vec3& x : raw_x_) {
    x_min_ = x_min_.cwiseMin(x);
    x_max_ = x_max_.cwiseMax(x);
  }
  mu_ = 0.0;
  for (double v : y_) mu_ += v;
  mu_ /= n;

  x_norm_.clear();
  x_norm_.reserve(n);
  for (const Vec3& x : raw_x_) {
    x_norm_.push_back(normalizeFeatures(x, x_min_, x_max_));
  }

  Eigen::MatrixXd K(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double v = seKernel(x_norm_[i], x_norm_[j], hp_);
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  K.diagonal().array() += hp_.sigma_n2;

  Eigen::VectorXd centered(n);
  for (int i = 0; i < n; ++i) centered(i) = y_[i] - mu_;

  Eigen::LLT<Eigen::MatrixXd> llt(K);
  if (llt.info() != Eigen::Success) {
    // Near-singular window (e.g. duplicate samples with tiny noise): retry
    // with diagonal jitter.
    K.diagonal().array() += 1e-10;
    llt.compute(K);
  }
  alpha_ = llt.solve(centered);
}

double GainRegressor::predict(const Vec3& raw_features) const {
  if (raw_x_.empty()) return 0.0;
  const Vec3 q = normalizeFeatures(raw_features, x_min_, x_max_);
  double acc = 0.0;
  for (size_t i = 0; i < x_norm_.size(); ++i) {
    acc += seKernel(q, x_norm_[i], hp_) * alpha_(static_cast<int>(i));
  }
  return mu_ + acc;
}

std::vector<double> GainRegressor::predictBatch(
    const std::vector<Vec3>& raw_features, ExecMode mode) const {
  std::vector<double> out(raw_features.size());
  if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < static_cast<int64_t>(raw_features.size()); ++i) {
      out[i] = predict(raw_features[i]);
    }
  } else {
    for (size_t i = 0; i < raw_features.size(); ++i) {
      out[i] = predict(raw_features[i]);
    }
  }
  return out;
}

Eigen::MatrixXd GainRegressor::kernelMatrix() const {
  const int n = static_cast<int>(x_norm_.size());
  Eigen::MatrixXd K(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      K(i, j) = seKernel(x_norm_[i], x_norm_[j], hp_);
    }
  }
  return K;
}

}  // namespace explore
