#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace reluipm {

/// v / ||v||_2. Throws ZeroVector when ||v|| < 1e-300; re-drawing is the caller's job.
Eigen::VectorXd project_sphere(const Eigen::Ref<const Eigen::VectorXd>& v);

constexpr double clip_interval(double x, double lo, double hi) {
  return x < lo ? lo : (x > hi ? hi : x);
}

/// Euclidean projection onto {w : 0 <= w_i <= cap, sum w = 1}.
///
/// Bisection on the shift lambda in w_i = clip(v_i - lambda, 0, cap), then an
/// exact re-solve of lambda on the final free set. Throws Infeasible when
/// k * cap < 1.
Eigen::VectorXd project_capped_simplex(const Eigen::Ref<const Eigen::VectorXd>& v, double cap);

enum class OptimizerKind { AdaptiveMoment, PlainSgd };
enum class Direction { Ascent, Descent };

struct OptimizerState {
  OptimizerKind kind = OptimizerKind::PlainSgd;
  double learning_rate = 1.0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t step_count = 0;
  Eigen::VectorXd first_moment;
  Eigen::VectorXd second_moment;

  static OptimizerState adam(double lr, Eigen::Index dim);
  static OptimizerState sgd(double lr, Eigen::Index dim);
  static OptimizerState make(OptimizerKind kind, double lr, Eigen::Index dim);

  Eigen::Index dimension() const { return first_moment.size(); }
};

/// One first-order step in place. Adaptive-moment uses the bias-corrected
/// moment recursion; plain SGD is params +/- lr * grad.
void optimizer_step(OptimizerState& state, Eigen::Ref<Eigen::VectorXd> params,
                    const Eigen::Ref<const Eigen::VectorXd>& grad, Direction direction);

}  // namespace reluipm
