#include "reluipm/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "reluipm/error.hpp"

namespace reluipm {

namespace {

void check_samples(const DiscriminatorEnsemble& e, const SampleSet& p, const SampleSet& q) {
  if (p.dim() != e.input_dim() || q.dim() != e.input_dim()) {
    std::ostringstream msg;
    msg << "ensemble dimension " << e.input_dim() << " vs samples " << p.dim() << " and " << q.dim();
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
}

// A = X Theta^T + 1 mu^T for rows [theta, mu].
Eigen::MatrixXd affine_scores(const Eigen::MatrixXd& params, Eigen::Index d, const Eigen::MatrixXd& x) {
  Eigen::MatrixXd a = x * params.leftCols(d).transpose();
  a.rowwise() += params.col(d).transpose();
  return a;
}

// Gradient of sum_k gap_k^2 for single-unit families given the activation
// derivative matrices on both samples.
void single_unit_gradient(const SampleSet& p, const SampleSet& q, const Eigen::MatrixXd& dp,
                          const Eigen::MatrixXd& dq, const Eigen::VectorXd& gaps, Eigen::Index d,
                          Eigen::MatrixXd& grad) {
  const Eigen::MatrixXd wp = dp.array().colwise() * p.weights().array();
  const Eigen::MatrixXd wq = dq.array().colwise() * q.weights().array();
  grad.resize(gaps.size(), d + 1);
  grad.leftCols(d) = wp.transpose() * p.points() - wq.transpose() * q.points();
  grad.col(d) = wp.colwise().sum().transpose() - wq.colwise().sum().transpose();
  grad.array().colwise() *= 2.0 * gaps.array();
}

}  // namespace

void DiscriminatorEnsemble::set_params(const Eigen::MatrixXd& params) {
  if (params.rows() != params_.rows() || params.cols() != params_.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "parameter matrix has the wrong shape");
  }
  params_ = params;
}

Eigen::VectorXd DiscriminatorEnsemble::gaps(const SampleSet& p, const SampleSet& q) const {
  check_samples(*this, p, q);
  return values(p.points()).transpose() * p.weights() - values(q.points()).transpose() * q.weights();
}

Eigen::VectorXd DiscriminatorEnsemble::ascent_step(const SampleSet& p, const SampleSet& q,
                                                   OptimizerState& opt) {
  check_samples(*this, p, q);
  Eigen::MatrixXd grad;
  Eigen::VectorXd g = gaps_and_gradient(p, q, grad);
  Eigen::Map<Eigen::VectorXd> flat_params(params_.data(), params_.size());
  Eigen::Map<const Eigen::VectorXd> flat_grad(grad.data(), grad.size());
  optimizer_step(opt, flat_params, flat_grad, Direction::Ascent);
  project();
  return g;
}

// ---------------------------------------------------------------------------

ReluEnsemble::ReluEnsemble(Eigen::Index starts, Eigen::Index dim, RngStream& rng)
    : DiscriminatorEnsemble(starts, dim, dim + 1) {
  for (Eigen::Index k = 0; k < starts; ++k) {
    Eigen::VectorXd theta;
    do {
      theta = standard_normal(rng, static_cast<std::size_t>(dim));
    } while (theta.norm() < 1e-300);
    params_.row(k).head(dim) = project_sphere(theta).transpose();
    params_(k, dim) = rng.uniform(-1.0, 1.0);
  }
}

Eigen::MatrixXd ReluEnsemble::values(const Eigen::MatrixXd& points) const {
  return affine_scores(params_, dim_, points).cwiseMax(0.0);
}

namespace {

// Adds sign * sum_i w_i (theta_k . x_i + mu_k)_+ to gaps and the matching
// subgradient to grad, one point at a time so only K-length columns stay hot.
__attribute__((target_clones("avx512f", "avx2", "default")))
void relu_accumulate(const Eigen::MatrixXd& params, Eigen::Index d, const SampleSet& s, double sign,
                     Eigen::VectorXd& gaps, Eigen::MatrixXd& grad) {
  const Eigen::Index starts = params.rows();
  std::vector<double> act(static_cast<std::size_t>(starts));
  std::vector<double> mask(static_cast<std::size_t>(starts));
  std::vector<double> x(static_cast<std::size_t>(d));
  const double* mu = params.col(d).data();
  double* gap = gaps.data();
  double* gmu = grad.col(d).data();
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double w = sign * s.weights()[i];
    if (w == 0.0) continue;
    for (Eigen::Index j = 0; j < d; ++j) x[j] = s.points()(i, j);
    std::copy(mu, mu + starts, act.begin());
    for (Eigen::Index j = 0; j < d; ++j) {
      const double xj = x[j];
      const double* th = params.col(j).data();
      for (Eigen::Index k = 0; k < starts; ++k) act[k] += xj * th[k];
    }
    // Subgradient of (t)_+ at t = 0 is taken as 0.
    for (Eigen::Index k = 0; k < starts; ++k) {
      mask[k] = act[k] > 0.0 ? w : 0.0;
      gap[k] += mask[k] * act[k];
      gmu[k] += mask[k];
    }
    for (Eigen::Index j = 0; j < d; ++j) {
      const double xj = x[j];
      double* g = grad.col(j).data();
      for (Eigen::Index k = 0; k < starts; ++k) g[k] += mask[k] * xj;
    }
  }
}

}  // namespace

Eigen::VectorXd ReluEnsemble::gaps_and_gradient(const SampleSet& p, const SampleSet& q,
                                                Eigen::MatrixXd& grad) const {
  Eigen::VectorXd gaps = Eigen::VectorXd::Zero(starts());
  grad = Eigen::MatrixXd::Zero(starts(), dim_ + 1);
  relu_accumulate(params_, dim_, p, 1.0, gaps, grad);
  relu_accumulate(params_, dim_, q, -1.0, gaps, grad);
  grad.array().colwise() *= 2.0 * gaps.array();
  return gaps;
}

void ReluEnsemble::project() {
  for (Eigen::Index k = 0; k < starts(); ++k) {
    auto theta = params_.row(k).head(dim_);
    const double norm = theta.norm();
    // theta only vanishes if a step cancels it exactly; use the first axis.
    if (norm < 1e-300) {
      theta.setZero();
      theta[0] = 1.0;
    } else {
      theta /= norm;
    }
    params_(k, dim_) = clip_interval(params_(k, dim_), -1.0, 1.0);
  }
}

Discriminator ReluEnsemble::decode(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  return ReluParams{row.head(dim_).transpose(), row[dim_]};
}

// ---------------------------------------------------------------------------

SigmoidEnsemble::SigmoidEnsemble(Eigen::Index starts, Eigen::Index dim, RngStream& rng)
    : DiscriminatorEnsemble(starts, dim, dim + 1) {
  for (Eigen::Index k = 0; k < starts; ++k) {
    params_.row(k).head(dim) = standard_normal(rng, static_cast<std::size_t>(dim)).transpose();
    params_(k, dim) = rng.uniform(-1.0, 1.0);
  }
}

Eigen::MatrixXd SigmoidEnsemble::values(const Eigen::MatrixXd& points) const {
  return affine_scores(params_, dim_, points).unaryExpr([](double t) { return sigmoid(t); });
}

Eigen::VectorXd SigmoidEnsemble::gaps_and_gradient(const SampleSet& p, const SampleSet& q,
                                                   Eigen::MatrixXd& grad) const {
  const Eigen::MatrixXd sp = values(p.points());
  const Eigen::MatrixXd sq = values(q.points());
  const Eigen::VectorXd gaps = sp.transpose() * p.weights() - sq.transpose() * q.weights();
  const Eigen::MatrixXd dp = sp.array() * (1.0 - sp.array());
  const Eigen::MatrixXd dq = sq.array() * (1.0 - sq.array());
  single_unit_gradient(p, q, dp, dq, gaps, dim_, grad);
  return gaps;
}

Discriminator SigmoidEnsemble::decode(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  return SigmoidParams{row.head(dim_).transpose(), row[dim_]};
}

// ---------------------------------------------------------------------------

HolderEnsemble::HolderEnsemble(Eigen::Index starts, Eigen::Index dim, RngStream& rng)
    : DiscriminatorEnsemble(starts, dim, dim * dim + 2 * dim + 1) {
  for (Eigen::Index k = 0; k < starts; ++k) {
    for (Eigen::Index c = 0; c < params_.cols(); ++c) params_(k, c) = rng.uniform(-1.0, 1.0);
  }
  project();
}

Discriminator HolderEnsemble::decode(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  const Eigen::Index d = dim_;
  HolderNetParams net;
  net.hidden_weights.resize(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) net.hidden_weights(r, c) = row[r * d + c];
  }
  net.hidden_bias = row.segment(d * d, d).transpose();
  net.output_weights = row.segment(d * d + d, d).transpose();
  net.output_bias = row[d * d + 2 * d];
  return net;
}

Eigen::MatrixXd HolderEnsemble::values(const Eigen::MatrixXd& points) const {
  Eigen::MatrixXd out(points.rows(), starts());
  for (Eigen::Index k = 0; k < starts(); ++k) {
    const auto net = std::get<HolderNetParams>(member(k));
    Eigen::MatrixXd hidden = points * net.hidden_weights.transpose();
    hidden.rowwise() += net.hidden_bias.transpose();
    const Eigen::VectorXd o =
        (hidden.cwiseMax(0.0) * net.output_weights).array() + net.output_bias;
    out.col(k) = o.cwiseMax(-1.0).cwiseMin(1.0);
  }
  return out;
}

double HolderEnsemble::start_mean(const Eigen::Ref<const Eigen::RowVectorXd>& row, const SampleSet& s,
                                  Eigen::Ref<Eigen::RowVectorXd> grad) const {
  const Eigen::Index d = dim_;
  const auto net = std::get<HolderNetParams>(decode(row));
  Eigen::MatrixXd pre = s.points() * net.hidden_weights.transpose();
  pre.rowwise() += net.hidden_bias.transpose();
  const Eigen::MatrixXd hidden = pre.cwiseMax(0.0);
  const Eigen::VectorXd out = (hidden * net.output_weights).array() + net.output_bias;

  grad.setZero();
  double mean = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double w = s.weights()[i];
    const double o = out[i];
    mean += w * std::clamp(o, -1.0, 1.0);
    // Clipped output has zero derivative once saturated.
    if (!(o > -1.0 && o < 1.0) || w == 0.0) continue;
    for (Eigen::Index r = 0; r < d; ++r) {
      if (pre(i, r) <= 0.0) continue;
      const double upstream = w * net.output_weights[r];
      for (Eigen::Index c = 0; c < d; ++c) grad[r * d + c] += upstream * s.points()(i, c);
      grad[d * d + r] += upstream;
      grad[d * d + d + r] += w * hidden(i, r);
    }
    grad[d * d + 2 * d] += w;
  }
  return mean;
}

Eigen::VectorXd HolderEnsemble::gaps_and_gradient(const SampleSet& p, const SampleSet& q,
                                                  Eigen::MatrixXd& grad) const {
  grad.resize(starts(), params_.cols());
  Eigen::VectorXd gaps(starts());
  Eigen::RowVectorXd gp(params_.cols());
  Eigen::RowVectorXd gq(params_.cols());
  for (Eigen::Index k = 0; k < starts(); ++k) {
    const double mp = start_mean(params_.row(k), p, gp);
    const double mq = start_mean(params_.row(k), q, gq);
    gaps[k] = mp - mq;
    grad.row(k) = 2.0 * gaps[k] * (gp - gq);
  }
  return gaps;
}

void HolderEnsemble::project() {
  const double bound = std::sqrt(static_cast<double>(dim_));
  params_ = params_.cwiseMax(-bound).cwiseMin(bound);
}

// ---------------------------------------------------------------------------

std::unique_ptr<DiscriminatorEnsemble> make_ensemble(DiscriminatorFamily family, Eigen::Index starts,
                                                     Eigen::Index dim, RngStream& rng) {
  if (starts < 1) throw Error(ErrorCode::InvalidArgument, "ensemble needs at least one start");
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "ensemble needs a positive input dimension");
  switch (family) {
    case DiscriminatorFamily::Relu: return std::make_unique<ReluEnsemble>(starts, dim, rng);
    case DiscriminatorFamily::Sigmoid: return std::make_unique<SigmoidEnsemble>(starts, dim, rng);
    case DiscriminatorFamily::HolderNet: return std::make_unique<HolderEnsemble>(starts, dim, rng);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown discriminator family");
}

}  // namespace reluipm
