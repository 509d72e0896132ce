#include "reluipm/balancing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "reluipm/ensemble.hpp"
#include "reluipm/error.hpp"
#include "reluipm/kernel.hpp"
#include "reluipm/rng.hpp"

namespace reluipm {

Eigen::Index CausalDataset::n_control() const {
  return static_cast<Eigen::Index>(std::count(treatment.begin(), treatment.end(), 0));
}

Eigen::Index CausalDataset::n_treated() const {
  return static_cast<Eigen::Index>(std::count(treatment.begin(), treatment.end(), 1));
}

std::vector<Eigen::Index> CausalDataset::indices(int group) const {
  std::vector<Eigen::Index> out;
  for (std::size_t i = 0; i < treatment.size(); ++i) {
    if (treatment[i] == group) out.push_back(static_cast<Eigen::Index>(i));
  }
  return out;
}

Eigen::MatrixXd CausalDataset::rows(int group) const {
  const auto idx = indices(group);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), x.cols());
  for (std::size_t r = 0; r < idx.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = x.row(idx[r]);
  return out;
}

Eigen::VectorXd CausalDataset::outcomes(int group) const {
  const auto idx = indices(group);
  Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t r = 0; r < idx.size(); ++r) out[static_cast<Eigen::Index>(r)] = y[idx[r]];
  return out;
}

void CausalDataset::validate() const {
  if (static_cast<Eigen::Index>(treatment.size()) != x.rows() || y.size() != x.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "X, T and Y must have the same number of rows");
  }
  for (int t : treatment) {
    if (t != 0 && t != 1) throw Error(ErrorCode::NonBinaryTreatment, "treatment must be 0 or 1");
  }
  if (n_control() < 1 || n_treated() < 1) {
    std::ostringstream msg;
    msg << "need both groups nonempty, got n0=" << n_control() << " n1=" << n_treated();
    throw Error(ErrorCode::EmptyGroup, msg.str());
  }
}

bool WeightVector::feasible(const CausalDataset& data, double tol) const {
  if (w.size() != data.size()) return false;
  double control_sum = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w[i] < 0.0 || w[i] > cap + 1e-12) return false;
    if (data.treatment[static_cast<std::size_t>(i)] == 1 && w[i] != 0.0) return false;
    if (data.treatment[static_cast<std::size_t>(i)] == 0) control_sum += w[i];
  }
  return std::abs(control_sum - 1.0) <= tol;
}

Eigen::VectorXd WeightVector::control_weights(const CausalDataset& data) const {
  const auto idx = data.indices(0);
  Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t r = 0; r < idx.size(); ++r) out[static_cast<Eigen::Index>(r)] = w[idx[r]];
  return out;
}

std::string to_string(IpmKind kind) {
  switch (kind) {
    case IpmKind::Relu: return "relu";
    case IpmKind::Sigmoid: return "sigmoid";
    case IpmKind::HolderNet: return "holder-nn";
    case IpmKind::MmdRbf: return "mmd-rbf";
    case IpmKind::MmdSobolev: return "mmd-sobolev";
  }
  return "unknown";
}

IpmKind ipm_kind_from_string(const std::string& name) {
  for (IpmKind k : {IpmKind::Relu, IpmKind::Sigmoid, IpmKind::HolderNet, IpmKind::MmdRbf, IpmKind::MmdSobolev}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorCode::InvalidArgument,
              "unknown ipm '" + name + "' (expected relu, sigmoid, holder-nn, mmd-rbf, mmd-sobolev)");
}

BalanceConfig BalanceConfig::preset(IpmKind kind) {
  BalanceConfig cfg;
  cfg.ipm = kind;
  switch (kind) {
    case IpmKind::Relu:
      break;
    case IpmKind::Sigmoid:
      cfg.adv_epochs = 3;
      cfg.lr = 0.1;
      cfg.lr_adv = 1.0;
      break;
    case IpmKind::HolderNet:
      cfg.lr = 0.01;
      cfg.lr_adv = 0.01;
      break;
    case IpmKind::MmdRbf:
    case IpmKind::MmdSobolev:
      cfg.lr = 0.03;
      break;
  }
  return cfg;
}

void BalanceConfig::validate() const {
  std::vector<std::string> problems;
  if (starts < 1) problems.push_back("starts must be >= 1");
  if (epochs < 1) problems.push_back("epochs must be >= 1");
  if (adv_epochs < 1) problems.push_back("adv_epochs must be >= 1");
  if (!(lr > 0.0)) problems.push_back("lr must be > 0");
  if (!(lr_adv > 0.0)) problems.push_back("lr_adv must be > 0");
  if (!(k_cap > 0.0)) problems.push_back("k_cap must be > 0");
  if (ipm == IpmKind::MmdRbf && !(sigma > 0.0)) problems.push_back("sigma must be > 0");
  if (problems.empty()) return;
  std::string msg;
  for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
  throw Error(ErrorCode::InvalidArgument, msg);
}

WeightVector initial_weights(const CausalDataset& data, double k_cap) {
  const Eigen::Index n0 = data.n_control();
  if (n0 < 1) throw Error(ErrorCode::EmptyGroup, "no control units");
  WeightVector out;
  out.cap = k_cap / static_cast<double>(n0);
  out.w = Eigen::VectorXd::Zero(data.size());
  for (Eigen::Index i : data.indices(0)) out.w[i] = 1.0 / static_cast<double>(n0);
  return out;
}

namespace {

WeightVector scatter_controls(const CausalDataset& data, const Eigen::VectorXd& control_w, double cap) {
  WeightVector out;
  out.cap = cap;
  out.w = Eigen::VectorXd::Zero(data.size());
  const auto idx = data.indices(0);
  for (std::size_t r = 0; r < idx.size(); ++r) out.w[idx[r]] = control_w[static_cast<Eigen::Index>(r)];
  return out;
}

DiscriminatorFamily family_of(IpmKind kind) {
  switch (kind) {
    case IpmKind::Sigmoid: return DiscriminatorFamily::Sigmoid;
    case IpmKind::HolderNet: return DiscriminatorFamily::HolderNet;
    default: return DiscriminatorFamily::Relu;
  }
}

}  // namespace

BalanceOutcome solve_balance(const CausalDataset& data, const BalanceConfig& cfg) {
  data.validate();
  cfg.validate();
  const Eigen::Index n0 = data.n_control();
  const double n0d = static_cast<double>(n0);
  const double cap = cfg.k_cap / n0d;
  if (n0d * cap < 1.0 - 1e-12) {
    throw Error(ErrorCode::Infeasible, "k_cap must be at least 1 for the weight set to be nonempty");
  }

  const NormalizationMap map = fit_normalization(data.x);
  const Eigen::MatrixXd x0 = map.apply(data.rows(0));
  const SampleSet treated(map.apply(data.rows(1)));

  // Descent runs on u = n0 * w so the step size is relative to uniform weights.
  // The start is kept if the final discriminators find it better balanced.
  const Eigen::VectorXd uniform = Eigen::VectorXd::Constant(n0, 1.0 / n0d);
  Eigen::VectorXd w = uniform;
  Eigen::VectorXd u = w * n0d;
  OptimizerState descent = OptimizerState::adam(cfg.lr, n0);

  auto descend = [&](const Eigen::VectorXd& grad_w) {
    optimizer_step(descent, u, grad_w / n0d, Direction::Descent);
    w = project_capped_simplex(u / n0d, cap);
    u = w * n0d;
  };

  BalanceOutcome out;
  out.epochs_run = cfg.epochs;

  if (cfg.ipm == IpmKind::MmdRbf || cfg.ipm == IpmKind::MmdSobolev) {
    const KernelSpec kernel = cfg.ipm == IpmKind::MmdRbf ? KernelSpec::rbf(cfg.sigma) : KernelSpec::sobolev();
    const Eigen::MatrixXd k00 = kernel_matrix(kernel, x0, x0);
    const Eigen::VectorXd k01q = kernel_matrix(kernel, x0, treated.points()) * treated.weights();
    const double k11 =
        treated.weights().dot(kernel_matrix(kernel, treated.points(), treated.points()) * treated.weights());
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) descend(2.0 * (k00 * w - k01q));
    auto mmd = [&](const Eigen::VectorXd& v) {
      return std::sqrt(std::max(v.dot(k00 * v) - 2.0 * v.dot(k01q) + k11, 0.0));
    };
    out.final_ipm = mmd(w);
    if (mmd(uniform) <= out.final_ipm) {
      w = uniform;
      out.final_ipm = mmd(w);
    }
  } else {
    RngStream rng(cfg.seed, cfg.stream);
    auto ensemble = make_ensemble(family_of(cfg.ipm), cfg.starts, data.dim(), rng);
    OptimizerState ascent = OptimizerState::sgd(cfg.lr_adv, ensemble->param_count());
    const Eigen::MatrixXd& x1 = treated.points();
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      const SampleSet controls(x0, w);
      for (int a = 0; a < cfg.adv_epochs; ++a) ensemble->ascent_step(controls, treated, ascent);
      const Eigen::MatrixXd f0 = ensemble->values(x0);
      const Eigen::VectorXd gaps = f0.transpose() * w - ensemble->values(x1).transpose() * treated.weights();
      descend(2.0 * f0 * gaps);
    }
    out.final_ipm = ensemble->gaps(SampleSet(x0, w), treated).cwiseAbs().maxCoeff();
    const double at_uniform = ensemble->gaps(SampleSet(x0, uniform), treated).cwiseAbs().maxCoeff();
    if (at_uniform <= out.final_ipm) {
      w = uniform;
      out.final_ipm = at_uniform;
    }
  }
  out.weights = scatter_controls(data, w, cap);
  return out;
}

double att_weighted(const WeightVector& w, const CausalDataset& data) {
  if (w.w.size() != data.size()) throw Error(ErrorCode::DimensionMismatch, "weight length differs from n");
  const Eigen::Index n1 = data.n_treated();
  if (n1 < 1) throw Error(ErrorCode::EmptyGroup, "no treated units");
  double treated_sum = 0.0;
  double control_sum = 0.0;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    if (data.treatment[static_cast<std::size_t>(i)] == 1) treated_sum += data.y[i];
    else control_sum += w.w[i] * data.y[i];
  }
  return treated_sum / static_cast<double>(n1) - control_sum;
}

AttEstimate att_balanced(const CausalDataset& data, const BalanceConfig& cfg) {
  BalanceOutcome sol = solve_balance(data, cfg);
  AttEstimate est;
  est.value = att_weighted(sol.weights, data);
  est.weights = std::move(sol.weights);
  est.final_ipm = sol.final_ipm;
  est.method = to_string(cfg.ipm) + "-cb";
  return est;
}

}  // namespace reluipm
