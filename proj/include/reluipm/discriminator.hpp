#pragma once

#include <variant>

#include <Eigen/Core>

#include "reluipm/sample_set.hpp"

namespace reluipm {

/// f(z) = (theta . z + mu)_+ with theta on the unit sphere and mu in [-1, 1].
struct ReluParams {
  Eigen::VectorXd theta;
  double mu = 0.0;

  bool feasible(double tol = 1e-9) const;
};

/// f(z) = sig(theta . z + mu), parameters unconstrained.
struct SigmoidParams {
  Eigen::VectorXd theta;
  double mu = 0.0;
};

/// One hidden layer of width d, ReLU hidden units, output clipped to [-1, 1].
/// Every weight and bias is kept in [-sqrt(d), sqrt(d)].
struct HolderNetParams {
  Eigen::MatrixXd hidden_weights;  // d x d, row r feeds hidden unit r
  Eigen::VectorXd hidden_bias;
  Eigen::VectorXd output_weights;
  double output_bias = 0.0;

  double clip_bound() const;
  bool feasible(double tol = 1e-12) const;
};

using Discriminator = std::variant<ReluParams, SigmoidParams, HolderNetParams>;

double relu_disc_eval(const ReluParams& p, const Eigen::Ref<const Eigen::VectorXd>& x);
double sigmoid_disc_eval(const SigmoidParams& p, const Eigen::Ref<const Eigen::VectorXd>& x);
double holder_disc_eval(const HolderNetParams& p, const Eigen::Ref<const Eigen::VectorXd>& x);

double evaluate(const Discriminator& disc, const Eigen::Ref<const Eigen::VectorXd>& x);
Eigen::Index input_dim(const Discriminator& disc);

/// Signed weighted mean difference sum_i p_i f(x_i) - sum_j q_j f(y_j).
double mean_gap(const Discriminator& disc, const SampleSet& p, const SampleSet& q);

double sigmoid(double t);

}  // namespace reluipm
