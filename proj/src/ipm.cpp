#include "reluipm/ipm.hpp"

#include <cmath>
#include <sstream>

#include "reluipm/error.hpp"
#include "reluipm/rng.hpp"

namespace reluipm {

namespace {

void validate(const SampleSet& p, const SampleSet& q, const AscentConfig& cfg) {
  if (p.empty() || q.empty()) throw Error(ErrorCode::EmptySample, "both samples must be nonempty");
  if (p.dim() != q.dim()) {
    std::ostringstream msg;
    msg << "sample dimensions differ: " << p.dim() << " vs " << q.dim();
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
  if (cfg.starts < 1 || cfg.epochs < 0) {
    throw Error(ErrorCode::InvalidArgument, "need starts >= 1 and epochs >= 0");
  }
  if (!(cfg.learning_rate > 0.0)) throw Error(ErrorCode::InvalidArgument, "learning rate must be positive");
}

}  // namespace

IpmResult estimate_ipm(DiscriminatorFamily family, const SampleSet& p, const SampleSet& q,
                       const AscentConfig& cfg) {
  validate(p, q, cfg);
  RngStream rng(cfg.seed, cfg.stream);
  auto ensemble = make_ensemble(family, cfg.starts, p.dim(), rng);
  OptimizerState opt = OptimizerState::make(cfg.optimizer, cfg.learning_rate, ensemble->param_count());

  const Eigen::Index k = ensemble->starts();
  Eigen::VectorXd best = Eigen::VectorXd::Constant(k, -1.0);
  Eigen::MatrixXd best_rows = ensemble->params();

  auto record = [&](const Eigen::VectorXd& gaps, const Eigen::MatrixXd& rows) {
    for (Eigen::Index s = 0; s < k; ++s) {
      const double g = std::abs(gaps[s]);
      if (g > best[s]) {
        best[s] = g;
        best_rows.row(s) = rows.row(s);
      }
    }
  };

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const Eigen::MatrixXd before = ensemble->params();
    const Eigen::VectorXd gaps = ensemble->ascent_step(p, q, opt);
    record(gaps, before);
  }
  record(ensemble->gaps(p, q), ensemble->params());

  // Re-evaluate each start's best parameters directly so value and
  // best_params agree exactly.
  IpmResult result;
  result.epochs_run = cfg.epochs;
  result.start_values.resize(k);
  Eigen::Index arg = 0;
  for (Eigen::Index s = 0; s < k; ++s) {
    result.start_values[s] = std::abs(mean_gap(ensemble->decode(best_rows.row(s)), p, q));
    if (result.start_values[s] > result.start_values[arg]) arg = s;
  }
  result.value = result.start_values[arg];
  result.best_params = ensemble->decode(best_rows.row(arg));
  return result;
}

IpmResult estimate_relu_ipm(const SampleSet& p, const SampleSet& q, const AscentConfig& cfg) {
  return estimate_ipm(DiscriminatorFamily::Relu, p, q, cfg);
}

IpmResult estimate_sigmoid_ipm(const SampleSet& p, const SampleSet& q, const AscentConfig& cfg) {
  return estimate_ipm(DiscriminatorFamily::Sigmoid, p, q, cfg);
}

IpmResult estimate_holder_nn_ipm(const SampleSet& p, const SampleSet& q, const AscentConfig& cfg) {
  return estimate_ipm(DiscriminatorFamily::HolderNet, p, q, cfg);
}

}  // namespace reluipm
