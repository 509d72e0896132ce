#include "reluipm/oracle_check.hpp"

#include <algorithm>
#include <cmath>

#include "reluipm/oracle.hpp"
#include "reluipm/parallel.hpp"
#include "reluipm/rng.hpp"
#include "reluipm/simulation.hpp"

namespace reluipm {

namespace {

SampleSet random_line_sample(RngStream& rng) {
  const auto size = static_cast<Eigen::Index>(5 + rng.next_u64() % 46);
  Eigen::MatrixXd pts(size, 1);
  Eigen::VectorXd w(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    pts(i, 0) = rng.uniform(-1.0, 1.0);
    w[i] = rng.uniform(0.05, 1.0);
  }
  return SampleSet(pts, w / w.sum());
}

double max_deviation(const std::vector<OracleCase>& cases) {
  double worst = 0.0;
  for (const auto& c : cases) worst = std::max(worst, std::abs(c.estimate - c.oracle));
  return worst;
}

}  // namespace

double OracleCheckReport::max_deviation_1d() const { return max_deviation(cases_1d); }
double OracleCheckReport::max_deviation_2d() const { return max_deviation(cases_2d); }

int OracleCheckReport::count_within_1d(double tol) const {
  return static_cast<int>(std::count_if(cases_1d.begin(), cases_1d.end(),
                                        [tol](const OracleCase& c) { return std::abs(c.estimate - c.oracle) <= tol; }));
}

OracleCheckReport run_oracle_check(const OracleCheckConfig& cfg) {
  OracleCheckReport report;
  report.cases_1d.resize(static_cast<std::size_t>(std::max(0, cfg.pairs_1d)));
  report.cases_2d.resize(static_cast<std::size_t>(std::max(0, cfg.pairs_2d)));
  const std::size_t n1 = report.cases_1d.size();

  parallel_for(n1 + report.cases_2d.size(), cfg.threads, [&](std::size_t task) {
    const std::uint64_t id = task + 1;
    RngStream rng(cfg.seed, id);
    AscentConfig est = cfg.estimator;
    est.seed = cfg.seed;
    est.stream = id;
    if (task < n1) {
      const SampleSet p = random_line_sample(rng);
      const SampleSet q = random_line_sample(rng);
      report.cases_1d[task] = {1, p.size(), q.size(), estimate_relu_ipm(p, q, est).value,
                               exact_relu_ipm_1d(p, q).value};
    } else {
      const SampleSet p(sample_uniform_ball(30, 2, rng));
      const SampleSet q(sample_uniform_ball(30, 2, rng));
      report.cases_2d[task - n1] = {2, 30, 30, estimate_relu_ipm(p, q, est).value,
                                    grid_relu_ipm(p, q, cfg.directions)};
    }
  });
  return report;
}

}  // namespace reluipm
