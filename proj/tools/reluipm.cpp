// reluipm command-line driver.
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "reluipm/balancing.hpp"
#include "reluipm/config.hpp"
#include "reluipm/csv.hpp"
#include "reluipm/error.hpp"
#include "reluipm/fairness.hpp"
#include "reluipm/ipm.hpp"
#include "reluipm/kernel.hpp"
#include "reluipm/oracle_check.hpp"
#include "reluipm/parallel.hpp"
#include "reluipm/report.hpp"
#include "reluipm/simulation.hpp"

using namespace reluipm;

namespace {

struct Options {
  std::string config_path;
  std::vector<std::string> sets;
  std::string seed;
  std::string format;
  std::string output;
  unsigned threads = default_threads();
  bool full = false;
  std::vector<std::string> inputs;
};

RunConfig load_config(const Options& opt) {
  RunConfig cfg = opt.config_path.empty() ? RunConfig{} : parse_config(opt.config_path);
  for (const auto& kv : opt.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::ParseError, "--set expects key=value, got '" + kv + "'");
    std::string key = kv.substr(0, eq);
    key.erase(key.find_last_not_of(" \t") + 1);
    cfg.set(key, kv.substr(eq + 1));
  }
  if (!opt.seed.empty()) cfg.set("seed", opt.seed);
  if (!opt.format.empty()) cfg.set("format", opt.format);
  if (!opt.output.empty()) cfg.set("output", opt.output);
  cfg.validate();
  return cfg;
}

// RELUIPM_OUTPUT_DIR relocates relative output paths; nothing else is read
// from the environment.
std::string output_path(const RunConfig& cfg) {
  if (cfg.output.empty()) return {};
  const char* dir = std::getenv("RELUIPM_OUTPUT_DIR");
  const std::filesystem::path out(cfg.output);
  if (dir == nullptr || *dir == '\0' || out.is_absolute()) return cfg.output;
  return (std::filesystem::path(dir) / out).string();
}

CsvSchema schema_of(const RunConfig& cfg) {
  CsvSchema s;
  s.covariates = cfg.covariates;
  s.treatment = cfg.treatment;
  s.outcome = cfg.outcome;
  s.group = cfg.group;
  s.score = cfg.score;
  s.delimiter = cfg.delimiter;
  return s;
}

// Shared map into the unit ball, applied only when some point lies outside it.
bool to_unit_ball(SampleSet& a, SampleSet& b) {
  if (a.in_unit_ball() && b.in_unit_ball()) return false;
  Eigen::MatrixXd pooled(a.size() + b.size(), a.dim());
  pooled << a.points(), b.points();
  const NormalizationMap map = fit_normalization(pooled);
  a = SampleSet(map.apply(a.points()), a.weights());
  b = SampleSet(map.apply(b.points()), b.weights());
  return true;
}

Report run_ipm(const RunConfig& cfg, const Options& opt) {
  SampleSet p = load_sample(opt.inputs.at(0), schema_of(cfg));
  SampleSet q = load_sample(opt.inputs.at(1), schema_of(cfg));
  if (p.dim() != q.dim()) throw Error(ErrorCode::SchemaMismatch, "the two samples have different column counts");
  const bool normalized = to_unit_ball(p, q);

  Report rep;
  rep.command = "ipm";
  rep.config = cfg;
  const IpmKind kind = ipm_kind_from_string(cfg.ipm);
  double value = 0.0;
  if (kind == IpmKind::MmdRbf || kind == IpmKind::MmdSobolev) {
    const KernelSpec k = kind == IpmKind::MmdRbf ? KernelSpec::rbf(cfg.sigma) : KernelSpec::sobolev();
    value = std::sqrt(mmd_squared(p, q, k));
  } else {
    const DiscriminatorFamily family = kind == IpmKind::Relu      ? DiscriminatorFamily::Relu
                                       : kind == IpmKind::Sigmoid ? DiscriminatorFamily::Sigmoid
                                                                  : DiscriminatorFamily::HolderNet;
    const IpmResult res = estimate_ipm(family, p, q, cfg.ascent_config());
    value = res.value;
    rep.results["start_values"] = std::vector<double>(res.start_values.begin(), res.start_values.end());
    if (const auto* relu = std::get_if<ReluParams>(&res.best_params)) {
      rep.results["theta"] = std::vector<double>(relu->theta.begin(), relu->theta.end());
      rep.results["mu"] = relu->mu;
    }
  }
  rep.add(cfg.ipm, "ipm", value, p.size(), 1);
  rep.results["kind"] = cfg.ipm;
  rep.results["value"] = value;
  rep.results["n_p"] = p.size();
  rep.results["n_q"] = q.size();
  rep.results["dim"] = p.dim();
  rep.results["normalized"] = normalized;
  return rep;
}

Report run_balance(const RunConfig& cfg, const Options& opt) {
  const CausalDataset data = load_causal_dataset(opt.inputs.at(0), schema_of(cfg));
  Report rep;
  rep.command = "balance";
  rep.config = cfg;
  nlohmann::ordered_json estimates = nlohmann::ordered_json::array();
  for (const auto& name : cfg.methods) {
    const BenchmarkMethod method = make_method(name, cfg.balance_config(), cfg.presets);
    const double att = method.estimate(data, 0);
    rep.add(name, "att", att, data.x.rows(), 1);
    estimates.push_back({{"method", name}, {"att", att}});
  }
  rep.results["n"] = data.x.rows();
  rep.results["n_treated"] = data.n_treated();
  rep.results["n_control"] = data.n_control();
  rep.results["estimates"] = estimates;
  return rep;
}

Report run_simulate(RunConfig cfg, const Options& opt) {
  if (opt.full) {
    cfg.replications = 1000;
    cfg.methods = {"relu-cb", "sigmoid-cb", "holder-cb", "mmd-rbf", "mmd-sobolev", "glm", "eb", "naive"};
  }
  BenchmarkConfig bench;
  bench.model = cfg.ks_config();
  bench.replications = cfg.replications;
  bench.threads = opt.threads;
  for (const auto& name : cfg.methods) bench.methods.push_back(make_method(name, cfg.balance_config(), cfg.presets));
  return benchmark_report(run_benchmark(bench), cfg);
}

Report run_convergence(const RunConfig& cfg, const Options& opt) {
  return rate_report(convergence_study(uniform_ball_pair(cfg.dim), cfg.rate_config(opt.threads)), cfg);
}

Report run_fairness(const RunConfig& cfg, const Options& opt) {
  const GroupedScores g = load_grouped_scores(opt.inputs.at(0), schema_of(cfg));
  const auto n = static_cast<long long>(g.scores0.size() + g.scores1.size());
  Report rep;
  rep.command = "fairness";
  rep.config = cfg;
  const std::vector<std::pair<const char*, FairFunction>> measures{
      {"dp", FairFunction::threshold(0.5)},
      {"dp_bar", FairFunction::identity()},
      {"dp_hinge", FairFunction::hinge()},
      {"dp_sigmoid", FairFunction::sigmoid()},
  };
  for (const auto& [name, phi] : measures) {
    const double v = dp_gap(g, phi);
    rep.add("fairness", name, v, n);
    rep.results[name] = v;
  }
  const double sdp = sdp_gap(g);
  rep.add("fairness", "sdp", sdp, n);
  rep.results["sdp"] = sdp;
  rep.results["n0"] = g.scores0.size();
  rep.results["n1"] = g.scores1.size();
  return rep;
}

Report run_audit(const RunConfig& cfg, const Options& opt) {
  const SampleSet z0 = load_sample(opt.inputs.at(0), schema_of(cfg));
  const SampleSet z1 = load_sample(opt.inputs.at(1), schema_of(cfg));
  const AuditReport a = audit_representation(z0, z1, cfg.audit_config());
  const auto n = static_cast<long long>(z0.size() + z1.size());
  Report rep;
  rep.command = "audit";
  rep.config = cfg;
  rep.add("audit", "ipm_value", a.ipm_value, n);
  rep.add("audit", "exponent", a.exponent, n);
  rep.add("audit", "bound_surrogate_x_c", a.bound_surrogate, n);
  rep.results["dim"] = a.dim;
  rep.results["beta"] = a.beta;
  rep.results["ipm_value"] = a.ipm_value;
  rep.results["exponent"] = a.exponent;
  rep.results["bound_surrogate"] = a.bound_surrogate;
  rep.results["bound"] = "c x " + std::to_string(a.bound_surrogate) + " (c unknown)";
  return rep;
}

Report run_oracle(const RunConfig& cfg, const Options& opt) {
  OracleCheckConfig oc;
  oc.estimator = cfg.ascent_config();
  oc.seed = cfg.seed;
  oc.threads = opt.threads;
  const OracleCheckReport r = run_oracle_check(oc);
  Report rep;
  rep.command = "oracle-check";
  rep.config = cfg;
  const auto c1 = static_cast<long long>(r.cases_1d.size());
  const auto c2 = static_cast<long long>(r.cases_2d.size());
  rep.add("oracle-1d", "max_abs_deviation", r.max_deviation_1d(), c1);
  rep.add("oracle-1d", "within_1e-3", r.count_within_1d(1e-3), c1);
  rep.add("oracle-2d", "max_abs_deviation", r.max_deviation_2d(), c2);
  auto cases = [](const std::vector<OracleCase>& cs) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& c : cs) out.push_back({{"n", c.n}, {"m", c.m}, {"estimate", c.estimate}, {"oracle", c.oracle}});
    return out;
  };
  rep.results["max_deviation_1d"] = r.max_deviation_1d();
  rep.results["max_deviation_2d"] = r.max_deviation_2d();
  rep.results["cases_1d"] = cases(r.cases_1d);
  rep.results["cases_2d"] = cases(r.cases_2d);
  return rep;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ReLU integral probability metric: estimation, covariate balancing and audits"};
  app.set_version_flag("--version", software_version());
  app.require_subcommand(1);

  Options opt;
  app.add_option("--config", opt.config_path, "key = value config file")->check(CLI::ExistingFile);
  app.add_option("--set", opt.sets, "override one config key (key=value), repeatable");
  app.add_option("--seed", opt.seed, "random seed");
  app.add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--format", opt.format, "csv or json");
  app.add_option("--output", opt.output, "output file (default stdout)");

  struct Command {
    const char* name;
    const char* help;
    std::size_t inputs;
    Report (*run)(const RunConfig&, const Options&);
  };
  const std::vector<Command> commands{
      {"ipm", "IPM between two samples (p.csv q.csv)", 2, run_ipm},
      {"balance", "ATT estimates on one dataset (data.csv)", 1, run_balance},
      {"simulate-ks", "Kang-Schafer replication benchmark", 0, [](const RunConfig& c, const Options& o) {
         return run_simulate(c, o);
       }},
      {"convergence", "empirical ReLU-IPM rate study on the unit ball", 0, run_convergence},
      {"fairness", "demographic parity gaps (scores.csv)", 1, run_fairness},
      {"audit", "representation audit (z0.csv z1.csv)", 2, run_audit},
      {"oracle-check", "estimator against the exact 1-D and grid oracles", 0, run_oracle},
  };
  std::vector<CLI::App*> subs;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    if (c.inputs > 0) {
      sub->add_option("inputs", opt.inputs, "input CSV files")
          ->required()
          ->expected(static_cast<int>(c.inputs))
          ->check(CLI::ExistingFile);
    }
    if (std::string(c.name) == "simulate-ks") {
      sub->add_flag("--full", opt.full, "1000 replications and every method");
    }
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const RunConfig cfg = load_config(opt);
    for (std::size_t i = 0; i < commands.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      const Report rep = commands[i].run(cfg, opt);
      emit_report(rep, cfg.format, output_path(cfg));
    }
  } catch (const Error& e) {
    std::cerr << "reluipm: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
  return 0;
}
