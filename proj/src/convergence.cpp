#include <cmath>
#include <sstream>

#include "reluipm/error.hpp"
#include "reluipm/numerics.hpp"
#include "reluipm/parallel.hpp"
#include "reluipm/simulation.hpp"

namespace reluipm {

Eigen::MatrixXd sample_uniform_ball(Eigen::Index n, Eigen::Index dim, RngStream& rng) {
  Eigen::MatrixXd out(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd z;
    do {
      z = standard_normal(rng, static_cast<std::size_t>(dim));
    } while (z.norm() < 1e-300);
    const double radius = std::pow(rng.uniform(), 1.0 / static_cast<double>(dim));
    out.row(i) = radius * project_sphere(z).transpose();
  }
  return out;
}

SamplerPair uniform_ball_pair(Eigen::Index dim) {
  auto sampler = [dim](Eigen::Index n, RngStream& rng) { return sample_uniform_ball(n, dim, rng); };
  std::ostringstream name;
  name << "uniform-ball(" << dim << ")";
  return SamplerPair{name.str(), dim, sampler, sampler};
}

LogLogFit fit_loglog(const std::vector<Eigen::Index>& grid, const std::vector<double>& means) {
  if (grid.size() != means.size() || grid.size() < 3) {
    throw Error(ErrorCode::InvalidArgument, "log-log fit needs at least three (n, mean) pairs");
  }
  const auto k = static_cast<Eigen::Index>(grid.size());
  Eigen::VectorXd lx(k), ly(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double m = means[static_cast<std::size_t>(i)];
    if (!(m > 0.0)) throw Error(ErrorCode::InvalidArgument, "log-log fit needs positive means");
    lx[i] = std::log(static_cast<double>(grid[static_cast<std::size_t>(i)]));
    ly[i] = std::log(m);
  }
  const double mx = lx.mean();
  const double my = ly.mean();
  const double sxx = (lx.array() - mx).square().sum();
  const double sxy = ((lx.array() - mx) * (ly.array() - my)).sum();
  LogLogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  const double rss = (ly.array() - fit.intercept - fit.slope * lx.array()).square().sum();
  fit.slope_se = std::sqrt(rss / static_cast<double>(k - 2) / sxx);
  return fit;
}

RateStudyReport convergence_study(const SamplerPair& dist, const RateStudyConfig& cfg) {
  if (cfg.grid.size() < 3) throw Error(ErrorCode::InvalidArgument, "grid needs at least three sizes");
  for (std::size_t i = 1; i < cfg.grid.size(); ++i) {
    if (cfg.grid[i] <= cfg.grid[i - 1]) throw Error(ErrorCode::InvalidArgument, "grid must be strictly ascending");
  }
  if (cfg.grid.front() < 1 || cfg.reps < 1) throw Error(ErrorCode::InvalidArgument, "need n >= 1 and reps >= 1");

  const std::size_t reps = static_cast<std::size_t>(cfg.reps);
  std::vector<double> values(cfg.grid.size() * reps, 0.0);
  parallel_for(values.size(), cfg.threads, [&](std::size_t task) {
    const std::size_t g = task / reps;
    const std::uint64_t id = task + 1;
    RngStream rng(cfg.seed, id);
    const Eigen::Index n = cfg.grid[g];
    const SampleSet p(dist.sample_p(n, rng));
    const SampleSet q(dist.sample_q(n, rng));
    AscentConfig est = cfg.estimator;
    est.seed = cfg.seed;
    est.stream = mix64(id);
    values[task] = estimate_relu_ipm(p, q, est).value;
  });

  RateStudyReport report;
  report.distribution = dist.name;
  report.grid = cfg.grid;
  report.reps = cfg.reps;
  for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
    double sum = 0.0;
    for (std::size_t r = 0; r < reps; ++r) sum += values[g * reps + r];
    report.means.push_back(sum / static_cast<double>(reps));
  }
  const LogLogFit fit = fit_loglog(report.grid, report.means);
  report.slope = fit.slope;
  report.slope_se = fit.slope_se;
  return report;
}

}  // namespace reluipm
