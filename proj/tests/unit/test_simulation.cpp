#include <doctest.h>

#include <cmath>
#include <vector>

#include "reluipm/error.hpp"
#include "reluipm/simulation.hpp"

using namespace reluipm;

TEST_CASE("Kang-Schafer transforms at z = 0") {
  const Eigen::Vector4d x = ks_covariates(Eigen::Vector4d::Zero());
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(10.0));
  CHECK(x[2] == doctest::Approx(0.216));
  CHECK(x[3] == doctest::Approx(400.0));
  CHECK(ks_score(Eigen::Vector4d::Zero()) == 0.0);
  CHECK(ks_propensity(Eigen::Vector4d::Zero(), 1.0) == doctest::Approx(0.5));
  CHECK(ks_propensity(Eigen::Vector4d::Zero(), 10.0) == doctest::Approx(0.5));

  const Eigen::Vector4d z(1.0, -1.0, 0.5, 2.0);
  CHECK(ks_score(z) == doctest::Approx(-1.0 - 0.5 - 0.125 - 0.2));
  // Model 2 pushes the same score further from one half.
  CHECK(std::abs(ks_propensity(z, 10.0) - 0.5) > std::abs(ks_propensity(z, 1.0) - 0.5));
}

TEST_CASE("Kang-Schafer marginals") {
  KangSchaferConfig cfg;
  cfg.n = 100000;
  cfg.seed = 3;
  const CausalDataset d = ks_generate(cfg);
  REQUIRE(d.size() == cfg.n);
  REQUIRE(d.dim() == 4);
  const Eigen::VectorXd mean = d.x.colwise().mean();
  // E exp(z/2) = exp(1/8); E (s + 20)^2 with s ~ N(0, 2) is 402.
  CHECK(mean[0] == doctest::Approx(std::exp(0.125)).epsilon(0.01));
  CHECK(mean[3] == doctest::Approx(402.0).epsilon(0.002));
  CHECK(std::abs(d.y.mean() - 210.0) < 0.5);
  const double treated = static_cast<double>(d.n_treated()) / static_cast<double>(d.size());
  CHECK(std::abs(treated - 0.5) < 0.01);
  // z / (1 + e^z) peaks near 0.278.
  CHECK(d.x.col(1).maxCoeff() < 10.28);
}

TEST_CASE("Kang-Schafer generation is reproducible and validated") {
  KangSchaferConfig cfg;
  cfg.n = 200;
  cfg.seed = 11;
  cfg.stream = 4;
  const CausalDataset a = ks_generate(cfg);
  const CausalDataset b = ks_generate(cfg);
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  CHECK(a.treatment == b.treatment);
  cfg.stream = 5;
  CHECK(ks_generate(cfg).x != a.x);

  // Tiny draws regenerate until both groups appear.
  cfg.n = 2;
  for (std::uint64_t s = 0; s < 20; ++s) {
    cfg.stream = s;
    const CausalDataset tiny = ks_generate(cfg);
    CHECK(tiny.n_control() == 1);
    CHECK(tiny.n_treated() == 1);
  }

  KangSchaferConfig bad;
  bad.n = 1;
  CHECK_THROWS_AS(ks_generate(bad), Error);
  bad.n = 100;
  bad.tau = 0.0;
  CHECK_THROWS_AS(ks_generate(bad), Error);
}

TEST_CASE("Benchmark summaries") {
  BenchmarkConfig cfg;
  cfg.model.n = 300;
  cfg.model.seed = 5;
  cfg.replications = 12;
  for (const char* m : {"glm", "naive", "oracle-zero"}) cfg.methods.push_back(make_method(m, BalanceConfig{}));
  const BenchmarkReport r = run_benchmark(cfg);
  REQUIRE(r.methods.size() == 3);
  for (const auto& m : r.methods) {
    CHECK(m.successes + m.failures == 12);
    CHECK(m.rmse >= std::abs(m.bias) - 1e-12);
  }
  CHECK(r.methods[2].bias == 0.0);
  CHECK(r.methods[2].rmse == 0.0);
  // Unweighted controls are badly confounded downward.
  CHECK(r.methods[1].bias < -10.0);

  // Rows are paired: replication r uses the same dataset for every method.
  KangSchaferConfig model = cfg.model;
  model.stream = 3;
  CHECK(r.estimates(2, 0) == att_sipw_glm(ks_generate(model)).value);

  cfg.replications = 1;
  const BenchmarkReport one = run_benchmark(cfg);
  CHECK(one.methods[0].successes == 1);
  CHECK(one.methods[0].rmse == doctest::Approx(std::abs(one.methods[0].bias)));

  cfg.replications = 0;
  CHECK_THROWS_AS(run_benchmark(cfg), Error);
  CHECK_THROWS_AS(make_method("lasso", BalanceConfig{}), Error);
}

TEST_CASE("Benchmark counts thrown errors as failures") {
  BenchmarkConfig cfg;
  cfg.model.n = 100;
  cfg.replications = 4;
  cfg.methods.push_back({"even-fails", [](const CausalDataset&, std::uint64_t rep) -> double {
                           if (rep % 2 == 0) throw Error(ErrorCode::NonConvergence, "test");
                           return 1.0;
                         }});
  const BenchmarkReport r = run_benchmark(cfg);
  CHECK(r.methods[0].successes == 2);
  CHECK(r.methods[0].failures == 2);
  CHECK(r.methods[0].bias == 1.0);
  CHECK(std::isnan(r.estimates(1, 0)));
}

TEST_CASE("Benchmark results do not depend on thread count") {
  BalanceConfig base;
  base.starts = 10;
  base.epochs = 40;
  BenchmarkConfig cfg;
  cfg.model.n = 200;
  cfg.model.seed = 9;
  cfg.replications = 6;
  cfg.methods = {make_method("relu-cb", base), make_method("eb", base)};
  cfg.threads = 1;
  const BenchmarkReport a = run_benchmark(cfg);
  cfg.threads = 4;
  const BenchmarkReport b = run_benchmark(cfg);
  for (Eigen::Index i = 0; i < a.estimates.size(); ++i) {
    const double x = a.estimates.data()[i];
    const double y = b.estimates.data()[i];
    CHECK(((std::isnan(x) && std::isnan(y)) || x == y));
  }
}

TEST_CASE("Log-log fit") {
  const std::vector<Eigen::Index> grid{100, 316, 1000, 3162, 10000};
  std::vector<double> means;
  for (auto n : grid) means.push_back(3.0 / std::sqrt(static_cast<double>(n)));
  const LogLogFit fit = fit_loglog(grid, means);
  CHECK(fit.slope == doctest::Approx(-0.5));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)));
  CHECK(fit.slope_se < 1e-10);

  means[2] *= 1.1;
  CHECK(fit_loglog(grid, means).slope_se > 0.0);
}

TEST_CASE("Uniform ball sampler") {
  RngStream rng(1, 1);
  const Eigen::MatrixXd x = sample_uniform_ball(20000, 3, rng);
  const Eigen::VectorXd r = x.rowwise().norm();
  CHECK(r.maxCoeff() <= 1.0);
  // P(|X| <= 1/2) = 1/8 in three dimensions.
  const double inner = static_cast<double>((r.array() <= 0.5).count()) / 20000.0;
  CHECK(std::abs(inner - 0.125) < 0.01);
  CHECK(x.colwise().mean().norm() < 0.03);
  CHECK(uniform_ball_pair(3).name == "uniform-ball(3)");
}

TEST_CASE("Convergence study on a small grid") {
  RateStudyConfig cfg;
  cfg.grid = {50, 200, 800};
  cfg.reps = 4;
  cfg.estimator.starts = 20;
  cfg.estimator.epochs = 100;
  cfg.seed = 2;
  const RateStudyReport a = convergence_study(uniform_ball_pair(2), cfg);
  REQUIRE(a.means.size() == 3);
  CHECK(a.means[0] > a.means[2]);
  CHECK(a.slope < 0.0);
  cfg.threads = 3;
  const RateStudyReport b = convergence_study(uniform_ball_pair(2), cfg);
  CHECK(a.means == b.means);

  cfg.grid = {50, 50, 100};
  CHECK_THROWS_AS(convergence_study(uniform_ball_pair(2), cfg), Error);
  cfg.grid = {50, 100};
  CHECK_THROWS_AS(convergence_study(uniform_ball_pair(2), cfg), Error);
}
