#include "reluipm/sample_set.hpp"

#include <cmath>
#include <sstream>

#include "reluipm/error.hpp"

namespace reluipm {

namespace {

void validate_weights(const Eigen::VectorXd& w, Eigen::Index n) {
  if (w.size() != n) {
    std::ostringstream msg;
    msg << "weights have length " << w.size() << " but there are " << n << " points";
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
  if (n == 0) return;
  if (!w.allFinite() || w.minCoeff() < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "weights must be finite and nonnegative");
  }
  if (std::abs(w.sum() - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "weights sum to " << w.sum() << ", expected 1";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
}

}  // namespace

SampleSet::SampleSet(Eigen::MatrixXd points) : points_(std::move(points)) {
  const Eigen::Index n = points_.rows();
  weights_ = n > 0 ? Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n))
                   : Eigen::VectorXd();
}

SampleSet::SampleSet(Eigen::MatrixXd points, Eigen::VectorXd weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  validate_weights(weights_, points_.rows());
}

bool SampleSet::in_unit_ball(double tol) const {
  if (empty()) return true;
  return points_.rowwise().norm().maxCoeff() <= 1.0 + tol;
}

SampleSet SampleSet::reweighted(Eigen::VectorXd weights) const {
  return SampleSet(points_, std::move(weights));
}

Eigen::MatrixXd NormalizationMap::apply(const Eigen::MatrixXd& raw) const {
  if (raw.cols() != center.size()) {
    throw Error(ErrorCode::DimensionMismatch, "normalization map dimension does not match data");
  }
  Eigen::MatrixXd out = raw.rowwise() - center.transpose();
  out.array().rowwise() /= feature_scale.transpose().array();
  return out / scale;
}

Eigen::VectorXd NormalizationMap::apply_point(const Eigen::VectorXd& raw) const {
  return apply(raw.transpose()).row(0).transpose();
}

NormalizationMap fit_normalization(const Eigen::MatrixXd& pooled) {
  if (pooled.rows() < 1) throw Error(ErrorCode::EmptySample, "cannot fit a map to zero rows");
  NormalizationMap map;
  const Eigen::VectorXd hi = pooled.colwise().maxCoeff().transpose();
  const Eigen::VectorXd lo = pooled.colwise().minCoeff().transpose();
  map.center = 0.5 * (hi + lo);
  map.feature_scale = 0.5 * (hi - lo);
  for (Eigen::Index j = 0; j < map.feature_scale.size(); ++j) {
    if (!(map.feature_scale[j] > 0.0)) map.feature_scale[j] = 1.0;
  }
  map.scale = 1.0;
  const double max_norm = map.apply(pooled).rowwise().norm().maxCoeff();
  map.scale = max_norm > 0.0 ? max_norm : 1.0;
  return map;
}

}  // namespace reluipm
