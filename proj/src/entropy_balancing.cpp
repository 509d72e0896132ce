#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/QR>

#include "reluipm/balancing.hpp"
#include "reluipm/error.hpp"

namespace reluipm {

namespace {

// Dual of the entropy problem: D(lambda) = log sum_i exp(c_i . lambda), where
// c_i are control covariates minus the treated means. Its gradient is the
// moment residual under w_i proportional to exp(c_i . lambda).
struct Dual {
  const Eigen::MatrixXd& c;

  double value(const Eigen::VectorXd& lambda, Eigen::VectorXd* weights = nullptr) const {
    const Eigen::VectorXd s = c * lambda;
    const double top = s.maxCoeff();
    const Eigen::VectorXd e = (s.array() - top).exp();
    const double total = e.sum();
    if (weights != nullptr) *weights = e / total;
    return top + std::log(total);
  }
};

constexpr double kLambdaBlowup = 1e6;

}  // namespace

WeightVector entropy_balancing(const CausalDataset& data, int max_iter, double tol) {
  data.validate();
  const Eigen::Index n0 = data.n_control();
  WeightVector out;
  out.cap = 1.0;
  out.w = Eigen::VectorXd::Zero(data.size());
  const auto controls = data.indices(0);
  if (n0 == 1) {
    out.w[controls.front()] = 1.0;
    return out;
  }

  const Eigen::RowVectorXd target = data.rows(1).colwise().mean();
  const Eigen::MatrixXd x0 = data.rows(0);
  // Newton runs on standardized columns; the residual test is in raw units.
  Eigen::RowVectorXd scale =
      ((x0.rowwise() - x0.colwise().mean()).array().square().colwise().mean()).sqrt();
  for (Eigen::Index j = 0; j < scale.size(); ++j) {
    if (!(scale[j] > 0.0)) scale[j] = 1.0;
  }
  const Eigen::MatrixXd c = (x0.rowwise() - target).array().rowwise() / scale.array();
  const Dual dual{c};

  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(c.cols());
  Eigen::VectorXd w;
  double f = dual.value(lambda, &w);
  for (int iter = 0; iter < max_iter; ++iter) {
    const Eigen::VectorXd grad = c.transpose() * w;
    const double residual = (grad.array() * scale.transpose().array()).abs().maxCoeff();
    if (residual < tol) {
      for (std::size_t r = 0; r < controls.size(); ++r) out.w[controls[r]] = w[static_cast<Eigen::Index>(r)];
      return out;
    }
    const Eigen::MatrixXd centered = c.rowwise() - grad.transpose();
    const Eigen::MatrixXd hessian = centered.transpose() * w.asDiagonal() * centered;
    Eigen::VectorXd step = -hessian.completeOrthogonalDecomposition().solve(grad);
    if (!step.allFinite() || step.dot(grad) >= 0.0) step = -grad;

    // Backtracking: halve until the dual objective decreases.
    bool moved = false;
    for (const Eigen::VectorXd& direction : {step, Eigen::VectorXd(-grad)}) {
      double t = 1.0;
      for (int h = 0; h < 60; ++h, t *= 0.5) {
        const Eigen::VectorXd trial = lambda + t * direction;
        Eigen::VectorXd trial_w;
        const double trial_f = dual.value(trial, &trial_w);
        if (std::isfinite(trial_f) && trial_f < f) {
          lambda = trial;
          w = std::move(trial_w);
          f = trial_f;
          moved = true;
          break;
        }
      }
      if (moved) break;
    }
    if (lambda.norm() > kLambdaBlowup || !moved) {
      std::ostringstream msg;
      msg << "moment residual stalled at " << residual << " with |lambda| = " << lambda.norm()
          << "; treated means are outside the control convex hull";
      throw Error(ErrorCode::HullViolation, msg.str());
    }
  }
  std::ostringstream msg;
  msg << "entropy balancing did not reach residual " << tol << " in " << max_iter << " iterations";
  throw Error(ErrorCode::NonConvergence, msg.str());
}

AttEstimate att_entropy_balancing(const CausalDataset& data) {
  AttEstimate est;
  est.weights = entropy_balancing(data);
  est.value = att_weighted(est.weights, data);
  est.method = "eb";
  return est;
}

}  // namespace reluipm
