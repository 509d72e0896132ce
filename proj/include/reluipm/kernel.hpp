#pragma once

#include <Eigen/Core>

#include "reluipm/sample_set.hpp"

namespace reluipm {

struct KernelSpec {
  enum class Kind { Rbf, Sobolev };
  Kind kind = Kind::Rbf;
  double sigma = 10.0;  // Rbf only

  static KernelSpec rbf(double sigma);
  static KernelSpec sobolev() { return KernelSpec{Kind::Sobolev, 0.0}; }
};

/// rbf: exp(-||x - y||^2 / sigma^2).
/// sobolev: prod_j {1 + k1(x_j) k1(y_j) + k2(x_j) k2(y_j) - k4(|x_j - y_j|)} with
/// k1(t) = t - 1/2, k2(t) = (k1^2 - 1/12) / 2, k4(t) = (k1^4 - k1^2 / 2 + 7/240) / 24.
double kernel_eval(const KernelSpec& k, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y);

/// Gram matrix K(a_i, b_j).
Eigen::MatrixXd kernel_matrix(const KernelSpec& k, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Weighted V-statistic MMD^2 (diagonal terms included), clamped at zero.
double mmd_squared(const SampleSet& p, const SampleSet& q, const KernelSpec& k);

}  // namespace reluipm
