#include "reluipm/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "reluipm/error.hpp"

namespace reluipm {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::string available(const std::vector<std::string>& header) {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? ", " : "") << header[i];
  return out.str();
}

int binary_cell(const CsvTable& t, std::size_t row, std::size_t col, ErrorCode code) {
  const double v = t.number(row, col);
  if (v != 0.0 && v != 1.0) {
    std::ostringstream msg;
    msg << "line " << t.lines[row] << ", column '" << t.header[col] << "': value '" << t.rows[row][col]
        << "' is not 0 or 1";
    throw Error(code, msg.str());
  }
  return v == 1.0 ? 1 : 0;
}

std::vector<std::size_t> covariate_columns(const CsvTable& t, const CsvSchema& schema,
                                           const std::vector<std::string>& reserved) {
  std::vector<std::size_t> cols;
  if (!schema.covariates.empty()) {
    for (const auto& name : schema.covariates) cols.push_back(t.column(name));
    return cols;
  }
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (std::find(reserved.begin(), reserved.end(), t.header[c]) == reserved.end()) cols.push_back(c);
  }
  if (cols.empty()) {
    throw Error(ErrorCode::SchemaMismatch, "no covariate columns left; available columns: " + available(t.header));
  }
  return cols;
}

Eigen::MatrixXd numeric_block(const CsvTable& t, const std::vector<std::size_t>& cols) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = t.number(r, cols[j]);
    }
  }
  return out;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw Error(ErrorCode::SchemaMismatch, "no column '" + name + "'; available columns: " + available(header));
  }
  return static_cast<std::size_t>(it - header.begin());
}

double CsvTable::number(std::size_t row, std::size_t col) const {
  const std::string cell = trim(rows[row][col]);
  double v = 0.0;
  const char* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << "line " << lines[row] << ", column '" << header[col] << "': ";
    if (cell.empty()) msg << "missing value";
    else msg << "'" << cell << "' is not a finite number";
    throw Error(ErrorCode::InvalidCell, msg.str());
  }
  return v;
}

CsvTable parse_csv(const std::string& text, char delimiter) {
  std::vector<std::vector<std::string>> records;
  std::vector<int> starts;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool record_open = false;
  int line = 1;
  int record_line = 1;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
  };
  auto end_record = [&] {
    end_field();
    const bool blank = record.size() == 1 && record[0].empty();
    if (!blank) {
      records.push_back(std::move(record));
      starts.push_back(record_line);
    }
    record.clear();
    record_open = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (!record_open) {
      record_open = true;
      record_line = line;
    }
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"' && trim(field).empty()) {
      field.clear();
      in_quotes = true;
    } else if (ch == delimiter) {
      end_field();
    } else if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      continue;
    } else if (ch == '\n') {
      end_record();
      ++line;
    } else {
      field.push_back(ch);
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::InvalidCell, "line " + std::to_string(record_line) + ": unterminated quoted field");
  }
  if (record_open) end_record();

  if (records.empty()) throw Error(ErrorCode::EmptyFile, "no header row");
  CsvTable table;
  table.header = std::move(records.front());
  for (auto& h : table.header) h = trim(h);
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size()) {
      std::ostringstream msg;
      msg << "line " << starts[r] << ": " << records[r].size() << " fields, header has " << table.header.size();
      throw Error(ErrorCode::InvalidCell, msg.str());
    }
    table.rows.push_back(std::move(records[r]));
    table.lines.push_back(starts[r]);
  }
  if (table.rows.empty()) throw Error(ErrorCode::EmptyFile, "header present but no data rows");
  return table;
}

CsvTable read_csv(const std::string& path, char delimiter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_csv(buf.str(), delimiter);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + std::string(e.what()).substr(to_string(e.code()).size() + 2));
  }
}

CausalDataset load_causal_dataset(const std::string& path, const CsvSchema& schema) {
  const CsvTable t = read_csv(path, schema.delimiter);
  const std::size_t tcol = t.column(schema.treatment);
  const std::size_t ycol = t.column(schema.outcome);
  const auto cols = covariate_columns(t, schema, {schema.treatment, schema.outcome, schema.group});

  CausalDataset data;
  data.x = numeric_block(t, cols);
  data.y.resize(static_cast<Eigen::Index>(t.rows.size()));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    data.treatment.push_back(binary_cell(t, r, tcol, ErrorCode::NonBinaryTreatment));
    data.y[static_cast<Eigen::Index>(r)] = t.number(r, ycol);
  }
  data.validate();
  return data;
}

GroupedScores load_grouped_scores(const std::string& path, const CsvSchema& schema) {
  const CsvTable t = read_csv(path, schema.delimiter);
  const std::size_t gcol = t.column(schema.group);
  const std::size_t scol = t.column(schema.score);
  GroupedScores g;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double s = t.number(r, scol);
    (binary_cell(t, r, gcol, ErrorCode::InvalidCell) == 0 ? g.scores0 : g.scores1).push_back(s);
  }
  return g;
}

SampleSet load_sample(const std::string& path, const CsvSchema& schema) {
  const CsvTable t = read_csv(path, schema.delimiter);
  return SampleSet(numeric_block(t, covariate_columns(t, schema, {})));
}

}  // namespace reluipm
