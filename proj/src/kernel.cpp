#include "reluipm/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "reluipm/error.hpp"

namespace reluipm {

namespace {

double k1(double t) { return t - 0.5; }
double k2(double t) {
  const double a = k1(t);
  return (a * a - 1.0 / 12.0) / 2.0;
}
double k4(double t) {
  const double a2 = k1(t) * k1(t);
  return (a2 * a2 - a2 / 2.0 + 7.0 / 240.0) / 24.0;
}

}  // namespace

KernelSpec KernelSpec::rbf(double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "rbf bandwidth must be positive");
  return KernelSpec{Kind::Rbf, sigma};
}

double kernel_eval(const KernelSpec& k, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "kernel arguments differ in dimension");
  if (k.kind == KernelSpec::Kind::Rbf) {
    return std::exp(-(x - y).squaredNorm() / (k.sigma * k.sigma));
  }
  double prod = 1.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    prod *= 1.0 + k1(x[j]) * k1(y[j]) + k2(x[j]) * k2(y[j]) - k4(std::abs(x[j] - y[j]));
  }
  return prod;
}

Eigen::MatrixXd kernel_matrix(const KernelSpec& k, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.cols() != b.cols()) throw Error(ErrorCode::DimensionMismatch, "kernel arguments differ in dimension");
  Eigen::MatrixXd out(a.rows(), b.rows());
  for (Eigen::Index j = 0; j < b.rows(); ++j) {
    const Eigen::VectorXd y = b.row(j).transpose();
    for (Eigen::Index i = 0; i < a.rows(); ++i) out(i, j) = kernel_eval(k, a.row(i).transpose(), y);
  }
  return out;
}

namespace {

// k(x, y) - 1 without forming k first; the constant drops out of the MMD
// because the signed weights sum to zero.
double kernel_minus_one(const KernelSpec& k, const double* x, const double* y, Eigen::Index d) {
  if (k.kind == KernelSpec::Kind::Rbf) {
    double sq = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) sq += (x[j] - y[j]) * (x[j] - y[j]);
    return std::expm1(-sq / (k.sigma * k.sigma));
  }
  double log_prod = 0.0;
  double prod = 1.0;
  bool positive = true;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double e = k1(x[j]) * k1(y[j]) + k2(x[j]) * k2(y[j]) - k4(std::abs(x[j] - y[j]));
    positive = positive && e > -0.5;
    if (positive) log_prod += std::log1p(e);
    prod *= 1.0 + e;
  }
  return positive ? std::expm1(log_prod) : prod - 1.0;
}

}  // namespace

double mmd_squared(const SampleSet& p, const SampleSet& q, const KernelSpec& k) {
  if (p.dim() != q.dim()) throw Error(ErrorCode::DimensionMismatch, "sample dimensions differ");
  const Eigen::Index n = p.size();
  const Eigen::Index d = p.dim();
  // Stack both samples row-major with signed weights (p, -q).
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> z(n + q.size(), d);
  z << p.points(), q.points();
  Eigen::VectorXd c(n + q.size());
  c << p.weights(), -q.weights();
  long double total = 0.0L;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    long double row = 0.5L * c[i] * kernel_minus_one(k, z.row(i).data(), z.row(i).data(), d);
    for (Eigen::Index j = 0; j < i; ++j) row += c[j] * kernel_minus_one(k, z.row(i).data(), z.row(j).data(), d);
    total += 2.0L * c[i] * row;
  }
  return std::max(static_cast<double>(total), 0.0);
}

}  // namespace reluipm
