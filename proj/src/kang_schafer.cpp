#include <cmath>
#include <sstream>

#include "reluipm/discriminator.hpp"
#include "reluipm/error.hpp"
#include "reluipm/simulation.hpp"

namespace reluipm {

void KangSchaferConfig::validate() const {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "Kang-Schafer needs n >= 2");
  if (!(tau > 0.0)) throw Error(ErrorCode::InvalidArgument, "Kang-Schafer needs tau > 0");
}

Eigen::Vector4d ks_covariates(const Eigen::Vector4d& z) {
  const double c = z[0] * z[2] / 25.0 + 0.6;
  const double s = z[1] + z[3] + 20.0;
  return {std::exp(z[0] / 2.0), z[0] / (1.0 + std::exp(z[0])) + 10.0, c * c * c, s * s};
}

double ks_score(const Eigen::Vector4d& z) { return -z[0] + 0.5 * z[1] - 0.25 * z[2] - 0.1 * z[3]; }

double ks_propensity(const Eigen::Vector4d& z, double tau) { return sigmoid(tau * ks_score(z)); }

namespace {

constexpr int kMaxRegenerations = 100;

CausalDataset draw(const KangSchaferConfig& cfg, RngStream& rng) {
  CausalDataset data;
  data.x.resize(cfg.n, 4);
  data.y.resize(cfg.n);
  data.treatment.resize(static_cast<std::size_t>(cfg.n));
  for (Eigen::Index i = 0; i < cfg.n; ++i) {
    Eigen::Vector4d z;
    for (int j = 0; j < 4; ++j) z[j] = rng.normal();
    const double eps = rng.normal();
    data.x.row(i) = ks_covariates(z).transpose();
    data.y[i] = 210.0 + 27.4 * z[0] + 13.7 * (z[1] + z[2] + z[3]) + eps;
    data.treatment[static_cast<std::size_t>(i)] = rng.uniform() < ks_propensity(z, cfg.tau) ? 1 : 0;
  }
  return data;
}

}  // namespace

CausalDataset ks_generate(const KangSchaferConfig& cfg) {
  cfg.validate();
  const RngStream base(cfg.seed, cfg.stream);
  RngStream rng = base;
  for (int attempt = 0; attempt <= kMaxRegenerations; ++attempt) {
    if (attempt > 0) rng = base.fork(static_cast<std::uint64_t>(attempt));
    CausalDataset data = draw(cfg, rng);
    if (data.n_control() > 0 && data.n_treated() > 0) return data;
  }
  std::ostringstream msg;
  msg << "every one of " << kMaxRegenerations << " regenerations left a treatment group empty (n="
      << cfg.n << ", tau=" << cfg.tau << ")";
  throw Error(ErrorCode::DegenerateDraw, msg.str());
}

}  // namespace reluipm
