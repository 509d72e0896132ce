#include "reluipm/discriminator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "reluipm/error.hpp"

namespace reluipm {

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

bool ReluParams::feasible(double tol) const {
  return std::abs(theta.norm() - 1.0) <= tol && mu >= -1.0 && mu <= 1.0;
}

double HolderNetParams::clip_bound() const { return std::sqrt(static_cast<double>(hidden_bias.size())); }

bool HolderNetParams::feasible(double tol) const {
  const double b = clip_bound() + tol;
  return hidden_weights.cwiseAbs().maxCoeff() <= b && hidden_bias.cwiseAbs().maxCoeff() <= b &&
         output_weights.cwiseAbs().maxCoeff() <= b && std::abs(output_bias) <= b;
}

double relu_disc_eval(const ReluParams& p, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return std::max(p.theta.dot(x) + p.mu, 0.0);
}

double sigmoid_disc_eval(const SigmoidParams& p, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return sigmoid(p.theta.dot(x) + p.mu);
}

double holder_disc_eval(const HolderNetParams& p, const Eigen::Ref<const Eigen::VectorXd>& x) {
  const Eigen::VectorXd hidden = (p.hidden_weights * x + p.hidden_bias).cwiseMax(0.0);
  const double out = p.output_weights.dot(hidden) + p.output_bias;
  return std::clamp(out, -1.0, 1.0);
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

double evaluate(const Discriminator& disc, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return std::visit(overloaded{
                        [&](const ReluParams& p) { return relu_disc_eval(p, x); },
                        [&](const SigmoidParams& p) { return sigmoid_disc_eval(p, x); },
                        [&](const HolderNetParams& p) { return holder_disc_eval(p, x); },
                    },
                    disc);
}

Eigen::Index input_dim(const Discriminator& disc) {
  return std::visit(overloaded{
                        [](const ReluParams& p) { return p.theta.size(); },
                        [](const SigmoidParams& p) { return p.theta.size(); },
                        [](const HolderNetParams& p) { return p.hidden_weights.cols(); },
                    },
                    disc);
}

double mean_gap(const Discriminator& disc, const SampleSet& p, const SampleSet& q) {
  const Eigen::Index d = input_dim(disc);
  if (p.dim() != d || q.dim() != d) {
    std::ostringstream msg;
    msg << "discriminator dimension " << d << " vs samples " << p.dim() << " and " << q.dim();
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
  double sp = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    sp += p.weights()[i] * evaluate(disc, p.points().row(i).transpose());
  }
  double sq = 0.0;
  for (Eigen::Index j = 0; j < q.size(); ++j) {
    sq += q.weights()[j] * evaluate(disc, q.points().row(j).transpose());
  }
  return sp - sq;
}

}  // namespace reluipm
