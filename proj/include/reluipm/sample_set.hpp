#pragma once

#include <Eigen/Core>

namespace reluipm {

/// Weighted point cloud: the empirical measure sum_i w_i delta_{x_i}.
///
/// Rows are points. Weights are nonnegative and sum to one; the default is
/// uniform. The unit-ball domain is not enforced here because raw covariates
/// pass through a NormalizationMap first; `in_unit_ball()` checks it.
class SampleSet {
 public:
  SampleSet() = default;
  explicit SampleSet(Eigen::MatrixXd points);
  SampleSet(Eigen::MatrixXd points, Eigen::VectorXd weights);

  const Eigen::MatrixXd& points() const noexcept { return points_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  Eigen::Index size() const noexcept { return points_.rows(); }
  Eigen::Index dim() const noexcept { return points_.cols(); }
  bool empty() const noexcept { return points_.rows() == 0; }

  bool in_unit_ball(double tol = 1e-9) const;

  /// Same points, new weights (validated).
  SampleSet reweighted(Eigen::VectorXd weights) const;

 private:
  Eigen::MatrixXd points_;
  Eigen::VectorXd weights_;
};

/// Affine map x -> ((x - center) / feature_scale) / scale into the unit ball.
///
/// Each feature is centered at its midrange and divided by its half-range;
/// the result is divided by the largest row norm so the fitting data lands in B^d.
struct NormalizationMap {
  Eigen::VectorXd center;
  Eigen::VectorXd feature_scale;
  double scale = 1.0;

  Eigen::MatrixXd apply(const Eigen::MatrixXd& raw) const;
  Eigen::VectorXd apply_point(const Eigen::VectorXd& raw) const;
};

/// Fit on pooled data so every sample shares one map. Needs at least one row.
NormalizationMap fit_normalization(const Eigen::MatrixXd& pooled);

}  // namespace reluipm
