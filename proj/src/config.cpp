#include "reluipm/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "reluipm/error.hpp"

namespace reluipm {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  if (trim(value).empty()) return out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
  throw Error(ErrorCode::ParseError, "key '" + key + "': '" + value + "' is not " + expected);
}

template <class T>
T parse_number(const std::string& key, const std::string& value, const char* expected) {
  T out{};
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || value.empty()) bad_value(key, value, expected);
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  const double v = parse_number<double>(key, value, "a real number");
  if (!std::isfinite(v)) bad_value(key, value, "a finite real number");
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  bad_value(key, value, "true or false");
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
std::string join(const std::vector<T>& items) {
  std::ostringstream out;
  for (std::size_t i = 0; i < items.size(); ++i) out << (i ? "," : "") << items[i];
  return out.str();
}

const std::set<std::string> kMethodNames{"relu-cb", "sigmoid-cb", "holder-cb", "mmd-rbf", "mmd-sobolev",
                                         "glm",     "eb",         "naive",     "oracle-zero"};

}  // namespace

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
  return {
      {"seed", std::to_string(seed)},
      {"ipm", ipm},
      {"starts", std::to_string(starts)},
      {"epochs", std::to_string(epochs)},
      {"adv_epochs", std::to_string(adv_epochs)},
      {"lr", format_real(lr)},
      {"lr_adv", format_real(lr_adv)},
      {"sigma", format_real(sigma)},
      {"k_cap", format_real(k_cap)},
      {"presets", presets ? "true" : "false"},
      {"tau", format_real(tau)},
      {"n", std::to_string(n)},
      {"replications", std::to_string(replications)},
      {"methods", join(methods)},
      {"grid", join(grid)},
      {"reps", std::to_string(reps)},
      {"dim", std::to_string(dim)},
      {"beta", format_real(beta)},
      {"delimiter", delimiter == '\t' ? std::string("tab") : std::string(1, delimiter)},
      {"covariates", join(covariates)},
      {"treatment", treatment},
      {"outcome", outcome},
      {"group", group},
      {"score", score},
      {"format", format},
      {"output", output},
  };
}

std::string RunConfig::echo() const {
  std::ostringstream out;
  for (const auto& [key, value] : entries()) out << key << " = " << value << '\n';
  return out.str();
}

void RunConfig::set(const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "seed") seed = parse_number<std::uint64_t>(key, value, "a nonnegative integer");
  else if (key == "ipm") ipm = value;
  else if (key == "starts") starts = parse_number<int>(key, value, "an integer");
  else if (key == "epochs") epochs = parse_number<int>(key, value, "an integer");
  else if (key == "adv_epochs") adv_epochs = parse_number<int>(key, value, "an integer");
  else if (key == "lr") lr = parse_real(key, value);
  else if (key == "lr_adv") lr_adv = parse_real(key, value);
  else if (key == "sigma") sigma = parse_real(key, value);
  else if (key == "k_cap") k_cap = parse_real(key, value);
  else if (key == "presets") presets = parse_bool(key, value);
  else if (key == "tau") tau = parse_real(key, value);
  else if (key == "n") n = parse_number<int>(key, value, "an integer");
  else if (key == "replications") replications = parse_number<int>(key, value, "an integer");
  else if (key == "methods") methods = split_list(value);
  else if (key == "grid") {
    grid.clear();
    for (const auto& item : split_list(value)) grid.push_back(parse_number<int>(key, item, "an integer"));
  } else if (key == "reps") reps = parse_number<int>(key, value, "an integer");
  else if (key == "dim") dim = parse_number<int>(key, value, "an integer");
  else if (key == "beta") beta = parse_real(key, value);
  else if (key == "delimiter") {
    if (value == "tab") delimiter = '\t';
    else if (value.size() == 1) delimiter = value[0];
    else bad_value(key, value, "a single character or 'tab'");
  } else if (key == "covariates") covariates = split_list(value);
  else if (key == "treatment") treatment = value;
  else if (key == "outcome") outcome = value;
  else if (key == "group") group = value;
  else if (key == "score") score = value;
  else if (key == "format") format = value;
  else if (key == "output") output = value;
  else throw Error(ErrorCode::ParseError, "unknown key '" + key + "'");
}

void RunConfig::validate() const {
  std::vector<std::string> problems;
  auto need = [&](bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  };
  try {
    ipm_kind_from_string(ipm);
  } catch (const Error&) {
    problems.push_back("ipm: unknown kind '" + ipm + "'");
  }
  need(starts >= 1, "starts: must be >= 1");
  need(epochs >= 1, "epochs: must be >= 1");
  need(adv_epochs >= 1, "adv_epochs: must be >= 1");
  need(lr > 0.0, "lr: must be > 0");
  need(lr_adv > 0.0, "lr_adv: must be > 0");
  need(sigma > 0.0, "sigma: must be > 0");
  need(k_cap >= 1.0, "k_cap: must be >= 1");
  need(tau > 0.0, "tau: must be > 0");
  need(n >= 2, "n: must be >= 2");
  need(replications >= 1, "replications: must be >= 1");
  need(!methods.empty(), "methods: at least one method is required");
  for (const auto& m : methods) need(kMethodNames.count(m) == 1, "methods: unknown method '" + m + "'");
  need(grid.size() >= 3, "grid: needs at least three sizes");
  need(std::is_sorted(grid.begin(), grid.end()) &&
           std::adjacent_find(grid.begin(), grid.end()) == grid.end(),
       "grid: must be strictly ascending");
  need(grid.empty() || grid.front() >= 1, "grid: sizes must be >= 1");
  need(reps >= 1, "reps: must be >= 1");
  need(dim >= 1 && dim <= 32, "dim: must be in [1, 32]");
  need(beta > 0.0, "beta: must be > 0");
  need(delimiter != '"' && delimiter != '\n' && delimiter != '\r' && delimiter != '#',
       "delimiter: cannot be a quote, newline or '#'");
  need(format == "csv" || format == "json", "format: must be csv or json");
  for (const auto& [key, value] : entries()) {
    need(value.find('#') == std::string::npos && value.find('\n') == std::string::npos,
         key + ": value cannot contain '#' or a newline");
  }
  if (problems.empty()) return;
  std::ostringstream msg;
  msg << problems.size() << " invalid setting(s):";
  for (const auto& p : problems) msg << "\n  " << p;
  throw Error(ErrorCode::ValidationError, msg.str());
}

BalanceConfig RunConfig::balance_config() const {
  BalanceConfig cfg;
  cfg.ipm = ipm_kind_from_string(ipm);
  cfg.lr = lr;
  cfg.lr_adv = lr_adv;
  cfg.adv_epochs = adv_epochs;
  cfg.sigma = sigma;
  cfg.k_cap = k_cap;
  cfg.starts = starts;
  cfg.epochs = epochs;
  cfg.seed = seed;
  return cfg;
}

AscentConfig RunConfig::ascent_config() const {
  AscentConfig cfg;
  cfg.starts = starts;
  cfg.epochs = epochs;
  cfg.optimizer = OptimizerKind::PlainSgd;
  cfg.learning_rate = lr_adv;
  cfg.seed = seed;
  return cfg;
}

KangSchaferConfig RunConfig::ks_config() const {
  KangSchaferConfig cfg;
  cfg.tau = tau;
  cfg.n = n;
  cfg.seed = seed;
  return cfg;
}

RateStudyConfig RunConfig::rate_config(unsigned threads) const {
  RateStudyConfig cfg;
  cfg.grid.assign(grid.begin(), grid.end());
  cfg.reps = reps;
  cfg.estimator = ascent_config();
  cfg.seed = seed;
  cfg.threads = threads;
  return cfg;
}

AuditConfig RunConfig::audit_config() const {
  AuditConfig cfg;
  cfg.beta = beta;
  cfg.estimator = ascent_config();
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no);
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ParseError, where + ": expected 'key = value', got '" + trim(line) + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw Error(ErrorCode::ParseError, where + ": missing key");
    if (!seen.insert(key).second) throw Error(ErrorCode::ParseError, where + ": key '" + key + "' repeated");
    try {
      cfg.set(key, line.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, where + ": " + std::string(e.what()).substr(sizeof("ParseError: ") - 1));
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace reluipm
