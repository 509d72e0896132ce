#pragma once

#include <string>
#include <vector>

#include "reluipm/balancing.hpp"
#include "reluipm/fairness.hpp"
#include "reluipm/sample_set.hpp"

namespace reluipm {

/// Parsed CSV text: a header and string cells, with the 1-based line on
/// which each record starts.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> lines;

  /// Column index by name; SchemaMismatch listing the available columns otherwise.
  std::size_t column(const std::string& name) const;
  /// Numeric cell; InvalidCell with line and column when it does not parse.
  double number(std::size_t row, std::size_t col) const;
};

/// RFC 4180 style: quoted fields may hold delimiters, newlines and doubled quotes.
CsvTable parse_csv(const std::string& text, char delimiter = ',');
CsvTable read_csv(const std::string& path, char delimiter = ',');

struct CsvSchema {
  std::vector<std::string> covariates;  // empty: every column not named below
  std::string treatment = "treatment";
  std::string outcome = "outcome";
  std::string group = "group";
  std::string score = "score";
  char delimiter = ',';
};

/// Covariates, a 0/1 treatment column and an outcome column.
CausalDataset load_causal_dataset(const std::string& path, const CsvSchema& schema);

/// Group column (0/1) and score column.
GroupedScores load_grouped_scores(const std::string& path, const CsvSchema& schema);

/// Covariate columns as an unweighted sample; empty covariates means every column.
SampleSet load_sample(const std::string& path, const CsvSchema& schema);

}  // namespace reluipm
