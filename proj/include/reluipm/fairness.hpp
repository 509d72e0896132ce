#pragma once

#include <vector>

#include "reluipm/ipm.hpp"
#include "reluipm/sample_set.hpp"

namespace reluipm {

/// Scores of a prediction function split by sensitive group s in {0, 1}.
struct GroupedScores {
  std::vector<double> scores0;
  std::vector<double> scores1;
};

struct FairFunction {
  enum class Kind { Threshold, Identity, Hinge, Sigmoid };

  Kind kind = Kind::Threshold;
  double tau = 0.5;

  static FairFunction threshold(double tau = 0.5) { return {Kind::Threshold, tau}; }
  static FairFunction identity() { return {Kind::Identity, 0.0}; }
  static FairFunction hinge() { return {Kind::Hinge, 0.0}; }
  static FairFunction sigmoid() { return {Kind::Sigmoid, 0.0}; }

  /// I(t >= tau), t, (1 - t)_+ or sig(t).
  double operator()(double t) const;
  /// Lipschitz constant; infinite for the threshold.
  double lipschitz() const;
};

/// |E phi(s) | group 0 - E phi(s) | group 1|.
double dp_gap(const GroupedScores& g, const FairFunction& phi);

/// Integral over tau in [0, 1] of |P(s0 >= tau) - P(s1 >= tau)|, exact.
/// Scores must lie in [0, 1].
double sdp_gap(const GroupedScores& g);

struct AuditConfig {
  double beta = 1.0;  // declared smoothness of the head; not verifiable here
  Eigen::Index dim = 0;  // 0: take it from the samples
  AscentConfig estimator;
  /// Map both samples into the unit ball with a shared map when some point lies outside.
  bool normalize = true;

  void validate() const;
};

struct AuditReport {
  double ipm_value = 0.0;
  double exponent = 1.0;
  /// ipm_value^exponent. The bound constant c is unknown and not included.
  double bound_surrogate = 0.0;
  Eigen::Index dim = 0;
  double beta = 1.0;
};

/// min(1, 2 beta / (d + 3)). Rejects beta == (d + 3) / 2.
double audit_exponent(double beta, Eigen::Index dim);

AuditReport audit_representation(const SampleSet& z0, const SampleSet& z1, const AuditConfig& cfg);

}  // namespace reluipm
