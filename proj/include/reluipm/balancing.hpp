#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "reluipm/numerics.hpp"
#include "reluipm/sample_set.hpp"

namespace reluipm {

/// Rows (X_i, T_i, Y_i); T is 0 (control) or 1 (treated).
struct CausalDataset {
  Eigen::MatrixXd x;
  std::vector<int> treatment;
  Eigen::VectorXd y;

  Eigen::Index size() const { return x.rows(); }
  Eigen::Index dim() const { return x.cols(); }
  Eigen::Index n_control() const;
  Eigen::Index n_treated() const;
  std::vector<Eigen::Index> indices(int group) const;
  Eigen::MatrixXd rows(int group) const;
  Eigen::VectorXd outcomes(int group) const;

  /// Shape checks plus both groups nonempty; throws EmptyGroup / DimensionMismatch.
  void validate() const;
};

/// Weights over all n units: zero on treated, summing to one over controls,
/// each at most `cap`.
struct WeightVector {
  Eigen::VectorXd w;
  double cap = 1.0;

  bool feasible(const CausalDataset& data, double tol = 1e-9) const;
  /// Control weights in control-index order.
  Eigen::VectorXd control_weights(const CausalDataset& data) const;
};

enum class IpmKind { Relu, Sigmoid, HolderNet, MmdRbf, MmdSobolev };

std::string to_string(IpmKind kind);
IpmKind ipm_kind_from_string(const std::string& name);

struct BalanceConfig {
  IpmKind ipm = IpmKind::Relu;
  double sigma = 10.0;        // rbf bandwidth
  double k_cap = 100.0;       // weights capped at k_cap / n0
  int starts = 100;           // discriminator ensemble size
  int epochs = 1000;          // outer descent rounds
  int adv_epochs = 1;         // ascent steps per round
  double lr = 0.05;           // adaptive-moment descent on weights
  double lr_adv = 1.0;        // plain SGD ascent on discriminators
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// Per-discriminator default hyperparameters for the benchmark.
  static BalanceConfig preset(IpmKind kind);
  void validate() const;
};

struct BalanceOutcome {
  WeightVector weights;
  /// Discrepancy at the final weights as seen by the solver: max |gap| over
  /// the ensemble, or the MMD for kernel variants.
  double final_ipm = 0.0;
  int epochs_run = 0;
};

struct AttEstimate {
  double value = 0.0;
  WeightVector weights;
  std::optional<double> final_ipm;
  std::string method;
};

WeightVector initial_weights(const CausalDataset& data, double k_cap = 100.0);

/// Covariates are mapped into the unit ball by a NormalizationMap fitted on
/// the pooled X. Each round runs adv_epochs ascent steps on the ensemble and
/// one adaptive-moment descent step on the control weights, taken in the
/// coordinates n0 * w, followed by projection onto the capped simplex.
/// Kernel variants descend on the closed-form MMD^2 and skip the ascent.
/// Uniform weights are returned instead when the final discriminators (or the
/// exact MMD) rate them at least as well balanced as the last iterate.
BalanceOutcome solve_balance(const CausalDataset& data, const BalanceConfig& cfg);

double att_weighted(const WeightVector& w, const CausalDataset& data);

/// solve_balance followed by att_weighted.
AttEstimate att_balanced(const CausalDataset& data, const BalanceConfig& cfg);

/// Logistic regression by IRLS with an intercept prepended to X.
/// Returns (intercept, slopes...). Throws Separation when T is constant or the
/// Hessian degenerates, NonConvergence when the gradient is still above 1e-4
/// after max_iter iterations.
Eigen::VectorXd fit_logistic(const Eigen::MatrixXd& x, const std::vector<int>& t, int max_iter = 100,
                             double tol = 1e-8);

/// Control weights proportional to the fitted odds pi / (1 - pi).
AttEstimate att_sipw_glm(const CausalDataset& data);

/// Minimum-entropy control weights matching the treated covariate means,
/// solved by damped Newton on the dual. Not capped.
WeightVector entropy_balancing(const CausalDataset& data, int max_iter = 500, double tol = 1e-6);

AttEstimate att_entropy_balancing(const CausalDataset& data);

}  // namespace reluipm
