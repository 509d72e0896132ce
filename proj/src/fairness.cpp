#include "reluipm/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "reluipm/discriminator.hpp"
#include "reluipm/error.hpp"

namespace reluipm {

double FairFunction::operator()(double t) const {
  switch (kind) {
    case Kind::Threshold: return t >= tau ? 1.0 : 0.0;
    case Kind::Identity: return t;
    case Kind::Hinge: return std::max(0.0, 1.0 - t);
    case Kind::Sigmoid: return reluipm::sigmoid(t);
  }
  return 0.0;
}

double FairFunction::lipschitz() const {
  switch (kind) {
    case Kind::Threshold: return std::numeric_limits<double>::infinity();
    case Kind::Identity:
    case Kind::Hinge: return 1.0;
    case Kind::Sigmoid: return 0.25;
  }
  return 0.0;
}

namespace {

void require_groups(const GroupedScores& g) {
  if (g.scores0.empty() || g.scores1.empty()) {
    throw Error(ErrorCode::EmptyGroup, "both sensitive groups need at least one score");
  }
}

double mean_of(const std::vector<double>& s, const FairFunction& phi) {
  double sum = 0.0;
  for (double t : s) sum += phi(t);
  return sum / static_cast<double>(s.size());
}

void require_unit_interval(const std::vector<double>& s, int group) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s[i] >= 0.0 && s[i] <= 1.0)) {
      std::ostringstream msg;
      msg << "score " << s[i] << " (group " << group << ", index " << i << ") is outside [0, 1]";
      throw Error(ErrorCode::ScoreOutOfRange, msg.str());
    }
  }
}

}  // namespace

double dp_gap(const GroupedScores& g, const FairFunction& phi) {
  require_groups(g);
  return std::abs(mean_of(g.scores0, phi) - mean_of(g.scores1, phi));
}

double sdp_gap(const GroupedScores& g) {
  require_groups(g);
  require_unit_interval(g.scores0, 0);
  require_unit_interval(g.scores1, 1);

  std::vector<double> s0 = g.scores0;
  std::vector<double> s1 = g.scores1;
  std::sort(s0.begin(), s0.end());
  std::sort(s1.begin(), s1.end());
  std::vector<double> knots;
  knots.reserve(s0.size() + s1.size() + 2);
  knots.push_back(0.0);
  knots.insert(knots.end(), s0.begin(), s0.end());
  knots.insert(knots.end(), s1.begin(), s1.end());
  knots.push_back(1.0);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  // On (a, b] between adjacent knots, P(s >= tau) = P(s > a).
  const double n0 = static_cast<double>(s0.size());
  const double n1 = static_cast<double>(s1.size());
  std::size_t i0 = 0;
  std::size_t i1 = 0;
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double a = knots[k];
    while (i0 < s0.size() && s0[i0] <= a) ++i0;
    while (i1 < s1.size() && s1[i1] <= a) ++i1;
    const double upper0 = static_cast<double>(s0.size() - i0) / n0;
    const double upper1 = static_cast<double>(s1.size() - i1) / n1;
    total += (knots[k + 1] - a) * std::abs(upper0 - upper1);
  }
  return total;
}

double audit_exponent(double beta, Eigen::Index dim) {
  if (!(beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "beta must be positive");
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "representation dimension must be >= 1");
  const double boundary = (static_cast<double>(dim) + 3.0) / 2.0;
  if (beta == boundary) {
    std::ostringstream msg;
    msg << "beta = (d + 3) / 2 = " << boundary << " is excluded";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
  return beta > boundary ? 1.0 : beta / boundary;
}

void AuditConfig::validate() const {
  if (!(beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "beta must be positive");
  if (dim < 0) throw Error(ErrorCode::InvalidArgument, "dim must be >= 0");
  if (dim > 0) audit_exponent(beta, dim);
}

AuditReport audit_representation(const SampleSet& z0, const SampleSet& z1, const AuditConfig& cfg) {
  cfg.validate();
  if (z0.empty() || z1.empty()) throw Error(ErrorCode::EmptyGroup, "both representation samples need rows");
  if (z0.dim() != z1.dim()) throw Error(ErrorCode::DimensionMismatch, "representation samples differ in dimension");
  if (cfg.dim > 0 && cfg.dim != z0.dim()) {
    std::ostringstream msg;
    msg << "configured dim " << cfg.dim << " but representations have " << z0.dim() << " columns";
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }

  AuditReport report;
  report.dim = z0.dim();
  report.beta = cfg.beta;
  report.exponent = audit_exponent(cfg.beta, report.dim);

  IpmResult ipm;
  if (cfg.normalize && !(z0.in_unit_ball() && z1.in_unit_ball())) {
    Eigen::MatrixXd pooled(z0.size() + z1.size(), z0.dim());
    pooled << z0.points(), z1.points();
    const NormalizationMap map = fit_normalization(pooled);
    ipm = estimate_relu_ipm(SampleSet(map.apply(z0.points()), z0.weights()),
                            SampleSet(map.apply(z1.points()), z1.weights()), cfg.estimator);
  } else {
    ipm = estimate_relu_ipm(z0, z1, cfg.estimator);
  }
  report.ipm_value = ipm.value;
  report.bound_surrogate = std::pow(ipm.value, report.exponent);
  return report;
}

}  // namespace reluipm
