#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "reluipm/config.hpp"

namespace reluipm {

struct ReportRow {
  std::string method;
  std::string measure;
  double value = 0.0;
  long long n = 0;
  long long replications = 1;
};

/// Output of one subcommand. CSV renders `rows`; JSON renders `results` with
/// the software version and the full config echo.
struct Report {
  std::string command;
  RunConfig config;
  std::vector<ReportRow> rows;
  nlohmann::ordered_json results = nlohmann::ordered_json::object();

  void add(std::string method, std::string measure, double value, long long n, long long replications = 1);
};

std::string software_version();

/// csv: header method,measure,value,n,replications and values with 17
/// significant digits. json: {software, command, config, results}.
std::string render_report(const Report& report, const std::string& format);

/// Writes to `path`, or stdout when empty. IoError on failure.
void emit_report(const Report& report, const std::string& format, const std::string& path);

/// Config echo carried in JSON output, back to a RunConfig.
RunConfig config_from_json(const nlohmann::ordered_json& echo);

Report benchmark_report(const BenchmarkReport& r, const RunConfig& cfg);
Report rate_report(const RateStudyReport& r, const RunConfig& cfg);

}  // namespace reluipm
