#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "reluipm/balancing.hpp"
#include "reluipm/ipm.hpp"
#include "reluipm/rng.hpp"

namespace reluipm {

// ---------------------------------------------------------------------------
// Kang-Schafer data

struct KangSchaferConfig {
  double tau = 1.0;  // 1 for Model 1, 10 for Model 2
  Eigen::Index n = 1000;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  void validate() const;
};

/// Observed covariates from latent z: (exp(z1/2), z1/(1+exp(z1)) + 10,
/// (z1 z3/25 + 0.6)^3, (z2 + z4 + 20)^2).
Eigen::Vector4d ks_covariates(const Eigen::Vector4d& z);

/// Linear treatment score -z1 + 0.5 z2 - 0.25 z3 - 0.1 z4.
double ks_score(const Eigen::Vector4d& z);

/// P(T = 1 | z) = expit(tau * score).
double ks_propensity(const Eigen::Vector4d& z, double tau);

/// One dataset. Draws that leave a group empty are regenerated from a fresh
/// child stream, at most 100 times before DegenerateDraw. True ATT is 0.
CausalDataset ks_generate(const KangSchaferConfig& cfg);

// ---------------------------------------------------------------------------
// Replication benchmark

/// ATT estimator under test. `replication` is the 1-based replication index,
/// to derive per-replication randomness.
struct BenchmarkMethod {
  std::string name;
  std::function<double(const CausalDataset&, std::uint64_t replication)> estimate;
};

/// Built-in estimators by name: relu-cb, sigmoid-cb, holder-cb, mmd-rbf,
/// mmd-sobolev, glm, eb, naive, oracle-zero. IPM methods start from `base`
/// with the discriminator kind (and the per-kind preset learning rates
/// when `use_presets`) substituted.
BenchmarkMethod make_method(const std::string& name, const BalanceConfig& base, bool use_presets = true);

struct BenchmarkConfig {
  KangSchaferConfig model;
  int replications = 100;
  std::vector<BenchmarkMethod> methods;
  unsigned threads = 1;
};

struct MethodSummary {
  std::string name;
  double bias = 0.0;
  double rmse = 0.0;
  int successes = 0;
  int failures = 0;
};

struct BenchmarkReport {
  std::vector<MethodSummary> methods;
  int replications = 0;
  Eigen::Index n = 0;
  double tau = 1.0;
  /// replications x methods; NaN where the method failed.
  Eigen::MatrixXd estimates;
};

/// Replication r (1-based) draws its dataset from stream r and every method
/// runs on that same dataset. Errors thrown by a method count as failures and
/// are left out of that method's bias and RMSE.
BenchmarkReport run_benchmark(const BenchmarkConfig& cfg);

// ---------------------------------------------------------------------------
// Convergence-rate study

struct SamplerPair {
  std::string name;
  Eigen::Index dim = 0;
  std::function<Eigen::MatrixXd(Eigen::Index n, RngStream& rng)> sample_p;
  std::function<Eigen::MatrixXd(Eigen::Index n, RngStream& rng)> sample_q;
};

Eigen::MatrixXd sample_uniform_ball(Eigen::Index n, Eigen::Index dim, RngStream& rng);

/// P = Q = uniform on the d-dimensional unit ball.
SamplerPair uniform_ball_pair(Eigen::Index dim);

struct RateStudyConfig {
  std::vector<Eigen::Index> grid{100, 316, 1000, 3162, 10000};
  int reps = 50;
  AscentConfig estimator;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct RateStudyReport {
  std::string distribution;
  std::vector<Eigen::Index> grid;
  std::vector<double> means;
  double slope = 0.0;
  double slope_se = 0.0;
  int reps = 0;
};

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
};

/// OLS of log(mean) on log(n).
LogLogFit fit_loglog(const std::vector<Eigen::Index>& grid, const std::vector<double>& means);

/// Mean empirical ReLU-IPM over reps at each n, then the log-log slope.
RateStudyReport convergence_study(const SamplerPair& dist, const RateStudyConfig& cfg);

}  // namespace reluipm
