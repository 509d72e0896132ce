#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "reluipm/error.hpp"
#include "reluipm/fairness.hpp"
#include "reluipm/oracle.hpp"
#include "reluipm/rng.hpp"
#include "reluipm/simulation.hpp"

using namespace reluipm;

namespace {

std::vector<double> uniform_scores(RngStream& rng, std::size_t n) {
  std::vector<double> s(n);
  for (auto& v : s) v = rng.uniform();
  return s;
}

// Scores in [0, 1] mapped onto [-1, 1].
SampleSet embed(const std::vector<double>& s) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(s.size()), 1);
  for (std::size_t i = 0; i < s.size(); ++i) x(static_cast<Eigen::Index>(i), 0) = 2.0 * s[i] - 1.0;
  return SampleSet(x);
}

double tail(const std::vector<double>& s, double tau) {
  return static_cast<double>(std::count_if(s.begin(), s.end(), [tau](double v) { return v >= tau; })) /
         static_cast<double>(s.size());
}

}  // namespace

TEST_CASE("Fair functions") {
  CHECK(FairFunction::threshold()(0.5) == 1.0);
  CHECK(FairFunction::threshold()(0.49) == 0.0);
  CHECK(FairFunction::identity()(0.3) == 0.3);
  CHECK(FairFunction::hinge()(0.25) == 0.75);
  CHECK(FairFunction::hinge()(1.5) == 0.0);
  CHECK(FairFunction::sigmoid()(0.0) == 0.5);
  CHECK(std::isinf(FairFunction::threshold().lipschitz()));
  CHECK(FairFunction::identity().lipschitz() == 1.0);
  CHECK(FairFunction::hinge().lipschitz() == 1.0);
  CHECK(FairFunction::sigmoid().lipschitz() == 0.25);
}

TEST_CASE("DP gap examples") {
  CHECK(dp_gap({{0.2, 0.4}, {0.6}}, FairFunction::identity()) == doctest::Approx(0.3));
  CHECK(dp_gap({{0.4, 0.6}, {0.6, 0.7}}, FairFunction::threshold(0.5)) == doctest::Approx(0.5));
  for (const auto& phi : {FairFunction::threshold(), FairFunction::identity(), FairFunction::hinge(),
                          FairFunction::sigmoid()}) {
    CHECK(dp_gap({{0.1, 0.9, 0.3}, {0.3, 0.1, 0.9}}, phi) == doctest::Approx(0.0));
  }
  CHECK_THROWS_AS(dp_gap({{}, {0.5}}, FairFunction::identity()), Error);
}

TEST_CASE("SDP gap examples") {
  CHECK(sdp_gap({{0.0}, {1.0}}) == doctest::Approx(1.0));
  CHECK(sdp_gap({{0.3, 0.7}, {0.7, 0.3}}) == 0.0);
  // One point each: the area between the tails is the distance.
  CHECK(sdp_gap({{0.2}, {0.65}}) == doctest::Approx(0.45));
  // Equal to the mean gap when one group dominates the other.
  CHECK(sdp_gap({{0.1, 0.2}, {0.5, 0.8}}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(sdp_gap({{1.2}, {0.5}}), Error);
  CHECK_THROWS_AS(sdp_gap({{0.5}, {-0.1}}), Error);
  CHECK_THROWS_AS(sdp_gap({{}, {0.5}}), Error);
}

TEST_CASE("SDP gap agrees with threshold sampling") {
  RngStream rng(8, 1);
  for (int trial = 0; trial < 5; ++trial) {
    GroupedScores g{uniform_scores(rng, 30), uniform_scores(rng, 17)};
    for (auto& s : g.scores1) s = s * s;
    double mc = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
      const double tau = rng.uniform();
      mc += std::abs(tail(g.scores0, tau) - tail(g.scores1, tau));
    }
    CHECK(std::abs(sdp_gap(g) - mc / draws) < 1e-2);
  }
}

TEST_CASE("SDP gap symmetries") {
  RngStream rng(4, 2);
  for (int trial = 0; trial < 20; ++trial) {
    GroupedScores g{uniform_scores(rng, 12), uniform_scores(rng, 9)};
    const double v = sdp_gap(g);
    CHECK(sdp_gap({g.scores1, g.scores0}) == doctest::Approx(v).epsilon(1e-12));
    GroupedScores perm = g;
    std::reverse(perm.scores0.begin(), perm.scores0.end());
    std::rotate(perm.scores1.begin(), perm.scores1.begin() + 4, perm.scores1.end());
    CHECK(sdp_gap(perm) == doctest::Approx(v).epsilon(1e-12));
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    // The identity gap is the signed version of the same integral.
    CHECK(dp_gap(g, FairFunction::identity()) <= v + 1e-12);
  }
}

TEST_CASE("Lipschitz gaps are bounded by the ReLU-IPM of embedded scores") {
  RngStream rng(21, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n0 = 2 + static_cast<std::size_t>(rng.next_u64() % 30);
    const auto n1 = 2 + static_cast<std::size_t>(rng.next_u64() % 30);
    GroupedScores g{uniform_scores(rng, n0), uniform_scores(rng, n1)};
    for (auto& s : g.scores1) s = std::sqrt(s);
    const double ipm = exact_relu_ipm_1d(embed(g.scores0), embed(g.scores1)).value;
    for (const auto& phi : {FairFunction::identity(), FairFunction::hinge()}) {
      CHECK(dp_gap(g, phi) <= phi.lipschitz() * ipm + 1e-9);
    }
  }
}

TEST_CASE("Audit exponent") {
  CHECK(audit_exponent(1.0, 2) == doctest::Approx(0.4));
  CHECK(audit_exponent(10.0, 2) == 1.0);
  CHECK(audit_exponent(0.5, 3) == doctest::Approx(1.0 / 6.0));
  CHECK_THROWS_AS(audit_exponent(2.5, 2), Error);
  CHECK_THROWS_AS(audit_exponent(0.0, 2), Error);
  CHECK_THROWS_AS(audit_exponent(1.0, 0), Error);
  CHECK(std::pow(0.1, audit_exponent(1.0, 2)) == doctest::Approx(0.398).epsilon(1e-3));
}

TEST_CASE("Audit of representations") {
  RngStream rng(6, 6);
  const Eigen::MatrixXd z = sample_uniform_ball(200, 2, rng);
  AuditConfig cfg;
  cfg.estimator.starts = 20;
  cfg.estimator.epochs = 200;
  const AuditReport same = audit_representation(SampleSet(z), SampleSet(z), cfg);
  CHECK(same.ipm_value < 1e-12);
  CHECK(same.bound_surrogate < 1e-4);
  CHECK(same.dim == 2);
  CHECK(same.exponent == doctest::Approx(0.4));

  Eigen::MatrixXd shifted = z * 0.5;
  shifted.col(0).array() += 0.4;
  const AuditReport diff = audit_representation(SampleSet(z), SampleSet(shifted), cfg);
  CHECK(diff.ipm_value > 0.05);
  CHECK(diff.bound_surrogate == doctest::Approx(std::pow(diff.ipm_value, 0.4)));
  CHECK(diff.bound_surrogate >= diff.ipm_value);

  // Samples outside the ball are mapped in with one shared map.
  const AuditReport scaled = audit_representation(SampleSet(Eigen::MatrixXd(z * 5.0)),
                                                  SampleSet(Eigen::MatrixXd(shifted * 5.0)), cfg);
  CHECK(scaled.ipm_value > 0.0);

  AuditConfig bad = cfg;
  bad.beta = 2.5;
  CHECK_THROWS_AS(audit_representation(SampleSet(z), SampleSet(z), bad), Error);
  bad = cfg;
  bad.dim = 3;
  CHECK_THROWS_AS(audit_representation(SampleSet(z), SampleSet(z), bad), Error);
  CHECK_THROWS_AS(audit_representation(SampleSet(z), SampleSet(Eigen::MatrixXd(z.leftCols(1))), cfg), Error);
}

TEST_CASE("Audit surrogate is monotone in the IPM") {
  for (double beta : {0.5, 1.0, 2.0, 4.0}) {
    const double e = audit_exponent(beta, 2);
    double prev = -1.0;
    for (int i = 0; i <= 100; ++i) {
      const double v = std::pow(i / 100.0, e);
      CHECK(v >= prev);
      prev = v;
    }
  }
}
