#include "reluipm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "reluipm/error.hpp"
#include "reluipm/numerics.hpp"

namespace reluipm {

OffsetScan scan_offsets(const Eigen::Ref<const Eigen::VectorXd>& t, const Eigen::Ref<const Eigen::VectorXd>& p,
                        const Eigen::Ref<const Eigen::VectorXd>& u, const Eigen::Ref<const Eigen::VectorXd>& q) {
  // gap(mu) = sum_i s_i (mu - b_i)_+ with kink b_i = -x_i and signed mass s_i.
  struct Kink {
    double at;
    double mass;
  };
  std::vector<Kink> kinks;
  kinks.reserve(static_cast<std::size_t>(t.size() + u.size()));
  for (Eigen::Index i = 0; i < t.size(); ++i) kinks.push_back({-t[i], p[i]});
  for (Eigen::Index j = 0; j < u.size(); ++j) kinks.push_back({-u[j], -q[j]});
  std::sort(kinks.begin(), kinks.end(), [](const Kink& a, const Kink& b) { return a.at < b.at; });

  std::vector<double> candidates;
  candidates.reserve(kinks.size() + 2);
  candidates.push_back(-1.0);
  for (const auto& k : kinks) candidates.push_back(clip_interval(k.at, -1.0, 1.0));
  candidates.push_back(1.0);
  std::sort(candidates.begin(), candidates.end());

  OffsetScan best;
  best.mu = -1.0;
  double slope = 0.0;      // sum of s_i over kinks left of mu
  double intercept = 0.0;  // sum of s_i b_i over the same kinks
  std::size_t next = 0;
  for (double mu : candidates) {
    while (next < kinks.size() && kinks[next].at < mu) {
      slope += kinks[next].mass;
      intercept += kinks[next].mass * kinks[next].at;
      ++next;
    }
    const double gap = std::abs(mu * slope - intercept);
    if (gap > best.value) {
      best.value = gap;
      best.mu = mu;
    }
  }
  return best;
}

ExactIpm exact_relu_ipm_1d(const SampleSet& p, const SampleSet& q) {
  if (p.dim() != 1 || q.dim() != 1) {
    std::ostringstream msg;
    msg << "exact 1-D oracle needs d = 1, got " << p.dim() << " and " << q.dim();
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
  ExactIpm out;
  out.params = ReluParams{Eigen::VectorXd::Constant(1, 1.0), 1.0};
  double best_scan = -1.0;
  for (double sign : {1.0, -1.0}) {
    const Eigen::VectorXd t = sign * p.points().col(0);
    const Eigen::VectorXd u = sign * q.points().col(0);
    const OffsetScan scan = scan_offsets(t, p.weights(), u, q.weights());
    if (scan.value > best_scan) {
      best_scan = scan.value;
      out.params = ReluParams{Eigen::VectorXd::Constant(1, sign), scan.mu};
    }
  }
  // Report the gap evaluated directly at the maximizer.
  out.value = std::abs(mean_gap(out.params, p, q));
  return out;
}

namespace {

double radical_inverse(std::uint64_t index, std::uint64_t base) {
  double result = 0.0;
  double f = 1.0 / static_cast<double>(base);
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= static_cast<double>(base);
  }
  return result;
}

constexpr std::uint64_t kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                                     59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131};

}  // namespace

Eigen::MatrixXd sphere_directions(Eigen::Index count, Eigen::Index dim) {
  const Eigen::Index pairs = (dim + 1) / 2;
  if (dim < 1 || 2 * pairs > static_cast<Eigen::Index>(std::size(kPrimes))) {
    throw Error(ErrorCode::InvalidArgument, "sphere_directions supports 1 <= d <= 32");
  }
  Eigen::MatrixXd out(count, dim);
  Eigen::VectorXd z(2 * pairs);
  for (Eigen::Index m = 0; m < count; ++m) {
    const auto index = static_cast<std::uint64_t>(m + 1);  // index 0 maps to the origin
    for (Eigen::Index j = 0; j < pairs; ++j) {
      const double u1 = 1.0 - radical_inverse(index, kPrimes[2 * j]);
      const double u2 = radical_inverse(index, kPrimes[2 * j + 1]);
      const double r = std::sqrt(-2.0 * std::log(u1));
      z[2 * j] = r * std::cos(2.0 * std::numbers::pi * u2);
      z[2 * j + 1] = r * std::sin(2.0 * std::numbers::pi * u2);
    }
    Eigen::VectorXd v = z.head(dim);
    if (v.norm() < 1e-300) {
      v.setZero();
      v[0] = 1.0;
    }
    out.row(m) = project_sphere(v).transpose();
  }
  return out;
}

double grid_relu_ipm(const SampleSet& p, const SampleSet& q, Eigen::Index directions) {
  if (p.dim() != q.dim()) throw Error(ErrorCode::DimensionMismatch, "sample dimensions differ");
  if (p.dim() < 2) throw Error(ErrorCode::InvalidArgument, "grid oracle needs d >= 2; use the 1-D oracle");
  const Eigen::MatrixXd dirs = sphere_directions(directions, p.dim());
  const Eigen::MatrixXd tp = p.points() * dirs.transpose();
  const Eigen::MatrixXd tq = q.points() * dirs.transpose();
  double best = 0.0;
  for (Eigen::Index m = 0; m < directions; ++m) {
    best = std::max(best, scan_offsets(tp.col(m), p.weights(), tq.col(m), q.weights()).value);
    best = std::max(best, scan_offsets(-tp.col(m), p.weights(), -tq.col(m), q.weights()).value);
  }
  return best;
}

}  // namespace reluipm
