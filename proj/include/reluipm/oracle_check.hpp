#pragma once

#include <cstdint>
#include <vector>

#include "reluipm/ipm.hpp"

namespace reluipm {

struct OracleCheckConfig {
  int pairs_1d = 50;
  int pairs_2d = 20;
  Eigen::Index directions = 4096;
  AscentConfig estimator;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct OracleCase {
  Eigen::Index dim = 1;
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  double estimate = 0.0;
  double oracle = 0.0;
};

struct OracleCheckReport {
  std::vector<OracleCase> cases_1d;
  std::vector<OracleCase> cases_2d;

  double max_deviation_1d() const;
  double max_deviation_2d() const;
  /// Number of 1-D cases with |estimate - oracle| <= tol.
  int count_within_1d(double tol) const;
};

/// 1-D pairs with 5 to 50 points in [-1, 1] and random weights, checked
/// against the exact breakpoint scan; d = 2 pairs of 30 points in the unit
/// disk, checked against the direction grid.
OracleCheckReport run_oracle_check(const OracleCheckConfig& cfg);

}  // namespace reluipm
