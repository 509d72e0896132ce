#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "reluipm/balancing.hpp"
#include "reluipm/fairness.hpp"
#include "reluipm/ipm.hpp"
#include "reluipm/simulation.hpp"

namespace reluipm {

/// Flat run configuration shared by every subcommand. Thread count is a
/// command-line flag only since results never depend on it. Each field is one
/// `key = value` line in a config file; list values are comma separated.
struct RunConfig {
  std::uint64_t seed = 0;

  // estimator / balancing
  std::string ipm = "relu";
  int starts = 100;
  int epochs = 1000;
  int adv_epochs = 1;
  double lr = 0.05;
  double lr_adv = 1.0;
  double sigma = 10.0;
  double k_cap = 100.0;
  bool presets = true;  // per-method preset learning rates

  // Kang-Schafer benchmark
  double tau = 1.0;
  int n = 1000;
  int replications = 100;
  std::vector<std::string> methods{"relu-cb", "glm", "eb", "naive"};

  // convergence study
  std::vector<int> grid{100, 316, 1000, 3162, 10000};
  int reps = 50;
  int dim = 3;

  // audit
  double beta = 1.0;

  // csv input
  char delimiter = ',';
  std::vector<std::string> covariates;  // empty: every other column
  std::string treatment = "treatment";
  std::string outcome = "outcome";
  std::string group = "group";
  std::string score = "score";

  // output
  std::string format = "csv";
  std::string output;  // empty: stdout

  bool operator==(const RunConfig&) const = default;

  /// Every key with its value as text, in declaration order.
  std::vector<std::pair<std::string, std::string>> entries() const;
  /// `key = value` lines; parse_config_text(echo()) == *this.
  std::string echo() const;

  /// Collects every violation and throws one ValidationError naming them.
  void validate() const;

  /// Assign one key from text. Throws ParseError for unknown keys or bad values.
  void set(const std::string& key, const std::string& value);

  BalanceConfig balance_config() const;
  /// Ascent settings for standalone IPM estimates: starts, epochs, SGD at lr_adv.
  AscentConfig ascent_config() const;
  KangSchaferConfig ks_config() const;
  RateStudyConfig rate_config(unsigned threads = 1) const;
  AuditConfig audit_config() const;
};

/// Parse `key = value` text; `#` starts a comment. Unknown or repeated keys
/// and malformed lines raise ParseError with the line number. The result is validated.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);

}  // namespace reluipm
