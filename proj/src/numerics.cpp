#include "reluipm/numerics.hpp"

#include <cmath>
#include <sstream>

#include "reluipm/error.hpp"

namespace reluipm {

Eigen::VectorXd project_sphere(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const double norm = v.norm();
  if (!(norm >= 1e-300)) throw Error(ErrorCode::ZeroVector, "cannot normalize a zero vector");
  return v / norm;
}

namespace {

double clipped_sum(const Eigen::Ref<const Eigen::VectorXd>& v, double shift, double cap) {
  return (v.array() - shift).max(0.0).min(cap).sum();
}

}  // namespace

Eigen::VectorXd project_capped_simplex(const Eigen::Ref<const Eigen::VectorXd>& v, double cap) {
  const Eigen::Index k = v.size();
  if (!(cap > 0.0) || static_cast<double>(k) * cap < 1.0 - 1e-12) {
    std::ostringstream msg;
    msg << "capped simplex with k=" << k << " and cap=" << cap << " is empty";
    throw Error(ErrorCode::Infeasible, msg.str());
  }

  // sum(lo) >= 1 >= sum(hi); the sum is nonincreasing in the shift.
  double lo = v.minCoeff() - cap;
  double hi = v.maxCoeff();
  double shift = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    shift = 0.5 * (lo + hi);
    const double s = clipped_sum(v, shift, cap);
    if (std::abs(s - 1.0) < 1e-10) break;
    if (s > 1.0) lo = shift;
    else hi = shift;
  }

  // Re-solve the shift exactly on the free set identified by bisection.
  double free_sum = 0.0;
  double upper_mass = 0.0;
  Eigen::Index n_free = 0;
  for (Eigen::Index i = 0; i < k; ++i) {
    const double t = v[i] - shift;
    if (t >= cap) upper_mass += cap;
    else if (t > 0.0) {
      free_sum += v[i];
      ++n_free;
    }
  }
  if (n_free > 0) {
    const double exact = (free_sum + upper_mass - 1.0) / static_cast<double>(n_free);
    if (std::abs(clipped_sum(v, exact, cap) - 1.0) <= std::abs(clipped_sum(v, shift, cap) - 1.0)) {
      shift = exact;
    }
  }
  return (v.array() - shift).max(0.0).min(cap).matrix();
}

OptimizerState OptimizerState::make(OptimizerKind kind, double lr, Eigen::Index dim) {
  if (!(lr > 0.0)) throw Error(ErrorCode::InvalidArgument, "learning rate must be positive");
  OptimizerState s;
  s.kind = kind;
  s.learning_rate = lr;
  s.first_moment = Eigen::VectorXd::Zero(dim);
  s.second_moment = Eigen::VectorXd::Zero(dim);
  return s;
}

OptimizerState OptimizerState::adam(double lr, Eigen::Index dim) {
  return make(OptimizerKind::AdaptiveMoment, lr, dim);
}

OptimizerState OptimizerState::sgd(double lr, Eigen::Index dim) {
  return make(OptimizerKind::PlainSgd, lr, dim);
}

void optimizer_step(OptimizerState& state, Eigen::Ref<Eigen::VectorXd> params,
                    const Eigen::Ref<const Eigen::VectorXd>& grad, Direction direction) {
  if (params.size() != grad.size() || params.size() != state.dimension()) {
    std::ostringstream msg;
    msg << "optimizer of dimension " << state.dimension() << " got params " << params.size()
        << " and grad " << grad.size();
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
  const double sign = direction == Direction::Ascent ? 1.0 : -1.0;
  ++state.step_count;

  if (state.kind == OptimizerKind::PlainSgd) {
    params += sign * state.learning_rate * grad;
    return;
  }

  auto m = state.first_moment.array();
  auto v = state.second_moment.array();
  m = state.beta1 * m + (1.0 - state.beta1) * grad.array();
  v = state.beta2 * v + (1.0 - state.beta2) * grad.array().square();
  const double t = static_cast<double>(state.step_count);
  const double m_corr = 1.0 - std::pow(state.beta1, t);
  const double v_corr = 1.0 - std::pow(state.beta2, t);
  params.array() +=
      sign * state.learning_rate * (m / m_corr) / ((v / v_corr).sqrt() + state.epsilon);
}

}  // namespace reluipm
