#include "reluipm/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "reluipm/error.hpp"

#ifndef RELUIPM_VERSION
#define RELUIPM_VERSION "0.0.0"
#endif

namespace reluipm {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void Report::add(std::string method, std::string measure, double value, long long n, long long replications) {
  rows.push_back({std::move(method), std::move(measure), value, n, replications});
}

std::string software_version() { return RELUIPM_VERSION; }

std::string render_report(const Report& report, const std::string& format) {
  if (format == "csv") {
    std::ostringstream out;
    out << "method,measure,value,n,replications\n";
    for (const auto& r : report.rows) {
      out << csv_field(r.method) << ',' << csv_field(r.measure) << ',' << format_value(r.value) << ',' << r.n << ','
          << r.replications << '\n';
    }
    return out.str();
  }
  if (format == "json") {
    nlohmann::ordered_json doc;
    doc["software"] = {{"name", "reluipm"}, {"version", software_version()}};
    doc["command"] = report.command;
    nlohmann::ordered_json echo = nlohmann::ordered_json::object();
    for (const auto& [key, value] : report.config.entries()) echo[key] = value;
    doc["config"] = echo;
    doc["results"] = report.results;
    return doc.dump(2) + "\n";
  }
  throw Error(ErrorCode::InvalidArgument, "unknown report format '" + format + "'");
}

void emit_report(const Report& report, const std::string& format, const std::string& path) {
  const std::string text = render_report(report, format);
  if (path.empty()) {
    std::cout << text << std::flush;
    if (!std::cout) throw Error(ErrorCode::IoError, "writing to stdout failed");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "writing '" + path + "' failed");
}

RunConfig config_from_json(const nlohmann::ordered_json& echo) {
  std::ostringstream text;
  for (const auto& [key, value] : echo.items()) {
    text << key << " = " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
  }
  return parse_config_text(text.str());
}

Report benchmark_report(const BenchmarkReport& r, const RunConfig& cfg) {
  Report rep;
  rep.command = "simulate-ks";
  rep.config = cfg;
  nlohmann::ordered_json methods = nlohmann::ordered_json::array();
  for (const auto& m : r.methods) {
    rep.add(m.name, "bias", m.bias, r.n, m.successes);
    rep.add(m.name, "rmse", m.rmse, r.n, m.successes);
    methods.push_back({{"method", m.name},
                       {"bias", m.bias},
                       {"rmse", m.rmse},
                       {"successes", m.successes},
                       {"failures", m.failures}});
  }
  rep.results["tau"] = r.tau;
  rep.results["n"] = r.n;
  rep.results["replications"] = r.replications;
  rep.results["methods"] = methods;
  return rep;
}

Report rate_report(const RateStudyReport& r, const RunConfig& cfg) {
  Report rep;
  rep.command = "convergence";
  rep.config = cfg;
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    rep.add(r.distribution, "mean_ipm", r.means[i], r.grid[i], r.reps);
  }
  rep.add(r.distribution, "slope", r.slope, r.grid.back(), r.reps);
  rep.add(r.distribution, "slope_se", r.slope_se, r.grid.back(), r.reps);
  rep.results["distribution"] = r.distribution;
  rep.results["grid"] = r.grid;
  rep.results["means"] = r.means;
  rep.results["slope"] = r.slope;
  rep.results["slope_se"] = r.slope_se;
  rep.results["reps"] = r.reps;
  return rep;
}

}  // namespace reluipm
