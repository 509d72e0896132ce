#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Cholesky>

#include "reluipm/balancing.hpp"
#include "reluipm/discriminator.hpp"
#include "reluipm/error.hpp"

namespace reluipm {

namespace {

// Mean Bernoulli log-likelihood with logits eta, computed stably.
double mean_log_likelihood(const Eigen::VectorXd& eta, const Eigen::VectorXd& t) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double e = eta[i];
    // log(1 + exp(e)) without overflow
    const double softplus = e > 0.0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e));
    ll += t[i] * e - softplus;
  }
  return ll / static_cast<double>(eta.size());
}

}  // namespace

Eigen::VectorXd fit_logistic(const Eigen::MatrixXd& x, const std::vector<int>& t, int max_iter, double tol) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  if (static_cast<Eigen::Index>(t.size()) != n) {
    throw Error(ErrorCode::DimensionMismatch, "treatment length differs from number of rows");
  }
  if (n == 0) throw Error(ErrorCode::EmptySample, "no rows to fit");
  Eigen::VectorXd target(n);
  for (Eigen::Index i = 0; i < n; ++i) target[i] = static_cast<double>(t[static_cast<std::size_t>(i)]);
  if (target.minCoeff() == target.maxCoeff()) {
    throw Error(ErrorCode::Separation, "all labels are equal; the maximum likelihood estimate diverges");
  }

  // Fit on standardized columns, then map the coefficients back.
  const Eigen::RowVectorXd mean = x.colwise().mean();
  Eigen::RowVectorXd sd = ((x.rowwise() - mean).array().square().colwise().sum() / static_cast<double>(n)).sqrt();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (!(sd[j] > 0.0)) sd[j] = 1.0;
  }
  Eigen::MatrixXd design(n, d + 1);
  design.col(0).setOnes();
  design.rightCols(d) = (x.rowwise() - mean).array().rowwise() / sd.array();

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(d + 1);
  Eigen::VectorXd eta = design * beta;
  double ll = mean_log_likelihood(eta, target);
  double grad_norm = 0.0;
  for (int iter = 0; iter < max_iter; ++iter) {
    const Eigen::VectorXd pi = eta.unaryExpr([](double e) { return sigmoid(e); });
    const Eigen::VectorXd grad = design.transpose() * (target - pi) / static_cast<double>(n);
    grad_norm = grad.norm();
    if (grad_norm < tol) break;
    const Eigen::VectorXd var = pi.array() * (1.0 - pi.array());
    const Eigen::MatrixXd info = design.transpose() * var.asDiagonal() * design / static_cast<double>(n);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 1e-14) {
      throw Error(ErrorCode::Separation, "information matrix is singular; the classes are separable");
    }
    const Eigen::VectorXd step = ldlt.solve(grad);
    if (!step.allFinite()) throw Error(ErrorCode::Separation, "Newton step is not finite");

    // Halve until the likelihood does not decrease.
    double scale = 1.0;
    Eigen::VectorXd trial_beta;
    Eigen::VectorXd trial_eta;
    double trial_ll = ll;
    for (int h = 0; h < 30; ++h) {
      trial_beta = beta + scale * step;
      trial_eta = design * trial_beta;
      trial_ll = mean_log_likelihood(trial_eta, target);
      if (trial_ll >= ll - 1e-15) break;
      scale *= 0.5;
    }
    beta = trial_beta;
    eta = trial_eta;
    ll = trial_ll;
  }
  if (grad_norm >= tol) {
    const Eigen::VectorXd pi = eta.unaryExpr([](double e) { return sigmoid(e); });
    grad_norm = (design.transpose() * (target - pi) / static_cast<double>(n)).norm();
  }
  if (grad_norm > 1e-4) {
    std::ostringstream msg;
    msg << "logistic fit stopped after " << max_iter << " iterations with gradient norm " << grad_norm;
    throw Error(ErrorCode::NonConvergence, msg.str());
  }

  Eigen::VectorXd out(d + 1);
  out.tail(d) = beta.tail(d).array() / sd.transpose().array();
  out[0] = beta[0] - (mean.transpose().array() * out.tail(d).array()).sum();
  return out;
}

AttEstimate att_sipw_glm(const CausalDataset& data) {
  data.validate();
  const Eigen::VectorXd beta = fit_logistic(data.x, data.treatment);
  const Eigen::VectorXd logit = (data.x * beta.tail(data.dim())).array() + beta[0];

  // Odds pi / (1 - pi) = exp(logit); normalize over controls with a max shift.
  const auto controls = data.indices(0);
  double max_logit = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i : controls) max_logit = std::max(max_logit, logit[i]);
  WeightVector w;
  w.cap = 1.0;
  w.w = Eigen::VectorXd::Zero(data.size());
  double total = 0.0;
  for (Eigen::Index i : controls) {
    w.w[i] = std::exp(logit[i] - max_logit);
    total += w.w[i];
  }
  w.w /= total;

  AttEstimate est;
  est.value = att_weighted(w, data);
  est.weights = std::move(w);
  est.method = "glm";
  return est;
}

}  // namespace reluipm
