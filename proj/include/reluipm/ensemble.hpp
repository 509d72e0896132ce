#pragma once

#include <memory>

#include <Eigen/Core>

#include "reluipm/discriminator.hpp"
#include "reluipm/numerics.hpp"
#include "reluipm/rng.hpp"
#include "reluipm/sample_set.hpp"

namespace reluipm {

/// K independently initialized discriminators of one family, stored one start
/// per row of a K x P parameter matrix.
///
/// The ascent objective is sum_k gap_k^2. Because it is separable across rows,
/// one optimizer over the flattened matrix updates every start independently
/// (both optimizers act coordinatewise).
class DiscriminatorEnsemble {
 public:
  virtual ~DiscriminatorEnsemble() = default;

  Eigen::Index starts() const noexcept { return params_.rows(); }
  Eigen::Index input_dim() const noexcept { return dim_; }
  Eigen::Index param_count() const noexcept { return params_.size(); }

  const Eigen::MatrixXd& params() const noexcept { return params_; }
  /// Replace every start's parameters (same shape), without projecting.
  void set_params(const Eigen::MatrixXd& params);

  /// n x K matrix of f_k(x_i).
  virtual Eigen::MatrixXd values(const Eigen::MatrixXd& points) const = 0;

  /// Signed gaps for every start; gradient of sum_k gap_k^2 written into grad
  /// (K x P, same layout as params()).
  virtual Eigen::VectorXd gaps_and_gradient(const SampleSet& p, const SampleSet& q,
                                            Eigen::MatrixXd& grad) const = 0;

  /// Restore the parameter constraints after a step.
  virtual void project() = 0;

  /// Discriminator encoded by one row of a K x P matrix.
  virtual Discriminator decode(const Eigen::Ref<const Eigen::RowVectorXd>& row) const = 0;

  Discriminator member(Eigen::Index k) const { return decode(params_.row(k)); }

  Eigen::VectorXd gaps(const SampleSet& p, const SampleSet& q) const;

  /// Gradient step on every start followed by project(). Returns the gaps at
  /// the parameters before the step.
  Eigen::VectorXd ascent_step(const SampleSet& p, const SampleSet& q, OptimizerState& opt);

 protected:
  DiscriminatorEnsemble(Eigen::Index starts, Eigen::Index dim, Eigen::Index per_start)
      : dim_(dim), params_(Eigen::MatrixXd::Zero(starts, per_start)) {}

  Eigen::Index dim_;
  Eigen::MatrixXd params_;
};

/// Rows [theta_1..theta_d, mu]. theta starts uniform on the sphere, mu
/// uniform on [-1, 1]; project() renormalizes theta and clips mu.
class ReluEnsemble final : public DiscriminatorEnsemble {
 public:
  ReluEnsemble(Eigen::Index starts, Eigen::Index dim, RngStream& rng);

  Eigen::MatrixXd values(const Eigen::MatrixXd& points) const override;
  Eigen::VectorXd gaps_and_gradient(const SampleSet& p, const SampleSet& q,
                                    Eigen::MatrixXd& grad) const override;
  void project() override;
  Discriminator decode(const Eigen::Ref<const Eigen::RowVectorXd>& row) const override;
};

/// Rows [theta_1..theta_d, mu], unconstrained. theta starts standard normal,
/// mu uniform on [-1, 1].
class SigmoidEnsemble final : public DiscriminatorEnsemble {
 public:
  SigmoidEnsemble(Eigen::Index starts, Eigen::Index dim, RngStream& rng);

  Eigen::MatrixXd values(const Eigen::MatrixXd& points) const override;
  Eigen::VectorXd gaps_and_gradient(const SampleSet& p, const SampleSet& q,
                                    Eigen::MatrixXd& grad) const override;
  void project() override {}
  Discriminator decode(const Eigen::Ref<const Eigen::RowVectorXd>& row) const override;
};

/// Rows [W (row-major d*d), b (d), v (d), c]. Entries start uniform on [-1, 1]
/// and are clipped to [-sqrt(d), sqrt(d)] by project().
class HolderEnsemble final : public DiscriminatorEnsemble {
 public:
  HolderEnsemble(Eigen::Index starts, Eigen::Index dim, RngStream& rng);

  Eigen::MatrixXd values(const Eigen::MatrixXd& points) const override;
  Eigen::VectorXd gaps_and_gradient(const SampleSet& p, const SampleSet& q,
                                    Eigen::MatrixXd& grad) const override;
  void project() override;
  Discriminator decode(const Eigen::Ref<const Eigen::RowVectorXd>& row) const override;

 private:
  // Mean of f over a weighted sample and its gradient for one start.
  double start_mean(const Eigen::Ref<const Eigen::RowVectorXd>& row, const SampleSet& s,
                    Eigen::Ref<Eigen::RowVectorXd> grad) const;
};

enum class DiscriminatorFamily { Relu, Sigmoid, HolderNet };

std::unique_ptr<DiscriminatorEnsemble> make_ensemble(DiscriminatorFamily family, Eigen::Index starts,
                                                     Eigen::Index dim, RngStream& rng);

}  // namespace reluipm
