#include <cmath>
#include <limits>

#include "reluipm/error.hpp"
#include "reluipm/parallel.hpp"
#include "reluipm/simulation.hpp"

namespace reluipm {

BenchmarkMethod make_method(const std::string& name, const BalanceConfig& base, bool use_presets) {
  auto ipm_method = [&](IpmKind kind) {
    BalanceConfig cfg = base;
    if (use_presets) {
      const BalanceConfig preset = BalanceConfig::preset(kind);
      cfg.lr = preset.lr;
      cfg.lr_adv = preset.lr_adv;
      cfg.adv_epochs = preset.adv_epochs;
    }
    cfg.ipm = kind;
    return BenchmarkMethod{name, [cfg](const CausalDataset& data, std::uint64_t replication) {
                             BalanceConfig run = cfg;
                             run.stream = cfg.stream + replication;
                             return att_balanced(data, run).value;
                           }};
  };
  if (name == "relu-cb") return ipm_method(IpmKind::Relu);
  if (name == "sigmoid-cb") return ipm_method(IpmKind::Sigmoid);
  if (name == "holder-cb") return ipm_method(IpmKind::HolderNet);
  if (name == "mmd-rbf") return ipm_method(IpmKind::MmdRbf);
  if (name == "mmd-sobolev") return ipm_method(IpmKind::MmdSobolev);
  if (name == "glm") {
    return {name, [](const CausalDataset& data, std::uint64_t) { return att_sipw_glm(data).value; }};
  }
  if (name == "eb") {
    return {name, [](const CausalDataset& data, std::uint64_t) { return att_entropy_balancing(data).value; }};
  }
  if (name == "naive") {
    return {name, [](const CausalDataset& data, std::uint64_t) {
              return att_weighted(initial_weights(data, static_cast<double>(data.n_control())), data);
            }};
  }
  if (name == "oracle-zero") {
    return {name, [](const CausalDataset&, std::uint64_t) { return 0.0; }};
  }
  throw Error(ErrorCode::InvalidArgument, "unknown benchmark method '" + name + "'");
}

BenchmarkReport run_benchmark(const BenchmarkConfig& cfg) {
  if (cfg.replications < 1) throw Error(ErrorCode::InvalidArgument, "replications must be >= 1");
  cfg.model.validate();
  const auto n_methods = static_cast<Eigen::Index>(cfg.methods.size());
  BenchmarkReport report;
  report.replications = cfg.replications;
  report.n = cfg.model.n;
  report.tau = cfg.model.tau;
  report.estimates = Eigen::MatrixXd::Constant(cfg.replications, n_methods,
                                               std::numeric_limits<double>::quiet_NaN());

  parallel_for(static_cast<std::size_t>(cfg.replications), cfg.threads, [&](std::size_t r) {
    const std::uint64_t replication = r + 1;
    KangSchaferConfig model = cfg.model;
    model.stream = replication;
    const CausalDataset data = ks_generate(model);
    for (Eigen::Index m = 0; m < n_methods; ++m) {
      try {
        const double est = cfg.methods[static_cast<std::size_t>(m)].estimate(data, replication);
        if (std::isfinite(est)) report.estimates(static_cast<Eigen::Index>(r), m) = est;
      } catch (const Error&) {
        // counted as a failure below
      }
    }
  });

  for (Eigen::Index m = 0; m < n_methods; ++m) {
    MethodSummary s;
    s.name = cfg.methods[static_cast<std::size_t>(m)].name;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (Eigen::Index r = 0; r < cfg.replications; ++r) {
      const double e = report.estimates(r, m);
      if (std::isnan(e)) {
        ++s.failures;
        continue;
      }
      ++s.successes;
      sum += e;
      sum_sq += e * e;
    }
    if (s.successes > 0) {
      s.bias = sum / s.successes;
      s.rmse = std::sqrt(sum_sq / s.successes);
    } else {
      s.bias = s.rmse = std::numeric_limits<double>::quiet_NaN();
    }
    report.methods.push_back(s);
  }
  return report;
}

}  // namespace reluipm
