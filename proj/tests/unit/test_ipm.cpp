#include <doctest.h>

#include <cmath>

#include "../support/brute_force.hpp"
#include "reluipm/discriminator.hpp"
#include "reluipm/ensemble.hpp"
#include "reluipm/error.hpp"
#include "reluipm/ipm.hpp"
#include "reluipm/kernel.hpp"
#include "reluipm/oracle.hpp"
#include "reluipm/simulation.hpp"

using namespace reluipm;
using reluipm::testing::brute_exact_1d;
using reluipm::testing::brute_mmd2;
using reluipm::testing::random_sample;

namespace {

SampleSet points_1d(std::initializer_list<double> xs) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(xs.size()), 1);
  Eigen::Index i = 0;
  for (double x : xs) m(i++, 0) = x;
  return SampleSet(m);
}

AscentConfig quick(int starts = 20, int epochs = 300) {
  AscentConfig c;
  c.starts = starts;
  c.epochs = epochs;
  return c;
}

}  // namespace

TEST_CASE("sample set validation") {
  CHECK_THROWS_AS(SampleSet(Eigen::MatrixXd::Zero(2, 1), Eigen::Vector2d(0.7, 0.7)), Error);
  CHECK_THROWS_AS(SampleSet(Eigen::MatrixXd::Zero(2, 1), Eigen::Vector2d(1.5, -0.5)), Error);
  CHECK_THROWS_AS(SampleSet(Eigen::MatrixXd::Zero(2, 1), Eigen::Vector3d(0.2, 0.3, 0.5)), Error);
  const SampleSet s(Eigen::MatrixXd::Zero(4, 2));
  CHECK(s.weights().isApprox(Eigen::VectorXd::Constant(4, 0.25)));
}

TEST_CASE("fit_normalization") {
  Eigen::MatrixXd two(2, 1);
  two << 0, 2;
  const NormalizationMap m = fit_normalization(two);
  const Eigen::MatrixXd mapped = m.apply(two);
  CHECK(mapped(0, 0) == doctest::Approx(-1.0));
  CHECK(mapped(1, 0) == doctest::Approx(1.0));

  Eigen::MatrixXd one(1, 3);
  one << 4, -2, 7;
  CHECK(fit_normalization(one).apply(one).norm() == 0.0);

  RngStream rng(4, 0);
  const Eigen::MatrixXd raw = 50.0 * Eigen::MatrixXd::Random(40, 3) + Eigen::MatrixXd::Constant(40, 3, 9.0);
  const Eigen::MatrixXd in_ball = fit_normalization(raw).apply(raw);
  CHECK(in_ball.rowwise().norm().maxCoeff() <= 1.0 + 1e-12);
  CHECK_THROWS_AS(fit_normalization(Eigen::MatrixXd(0, 2)), Error);
}

TEST_CASE("discriminator evaluation") {
  CHECK(relu_disc_eval({Eigen::Vector2d(1, 0), 0.0}, Eigen::Vector2d(0.5, 0.3)) == 0.5);
  CHECK(relu_disc_eval({Eigen::Vector2d(1, 0), -1.0}, Eigen::Vector2d(0.5, 0.0)) == 0.0);
  CHECK(relu_disc_eval({Eigen::Vector2d(0, 1), 1.0}, Eigen::Vector2d(0.0, 1.0)) == 2.0);

  const SampleSet p = points_1d({0.5});
  const SampleSet q = points_1d({-0.5});
  const Discriminator f = ReluParams{Eigen::VectorXd::Constant(1, 1.0), 0.5};
  CHECK(mean_gap(f, p, q) == doctest::Approx(1.0));
  CHECK(mean_gap(f, q, p) == doctest::Approx(-1.0));
  CHECK(mean_gap(f, p, p) == 0.0);
  CHECK_THROWS_AS(mean_gap(f, p, SampleSet(Eigen::MatrixXd::Zero(1, 2))), Error);

  HolderNetParams h{Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1), 0.0};
  CHECK(h.feasible());
  CHECK(holder_disc_eval(h, Eigen::Vector2d(0.9, 0.9)) == 1.0);  // clipped
  CHECK(holder_disc_eval(h, Eigen::Vector2d(0.2, -0.4)) == doctest::Approx(0.2));
}

TEST_CASE("ensemble gradients match finite differences") {
  RngStream rng(21, 0);
  const SampleSet p = random_sample(rng, 15, 2, true, -0.7, 0.7);
  const SampleSet q = random_sample(rng, 11, 2, true, -0.7, 0.7);
  for (auto family : {DiscriminatorFamily::Relu, DiscriminatorFamily::Sigmoid, DiscriminatorFamily::HolderNet}) {
    CAPTURE(static_cast<int>(family));
    RngStream init(22, 0);
    auto ens = make_ensemble(family, 4, 2, init);
    Eigen::MatrixXd grad;
    ens->gaps_and_gradient(p, q, grad);
    const Eigen::MatrixXd base = ens->params();
    const double h = 1e-6;
    double worst = 0.0;
    for (Eigen::Index r = 0; r < base.rows(); ++r) {
      for (Eigen::Index c = 0; c < base.cols(); ++c) {
        Eigen::MatrixXd plus = base, minus = base;
        plus(r, c) += h;
        minus(r, c) -= h;
        ens->set_params(plus);
        const double up = ens->gaps(p, q).squaredNorm();
        ens->set_params(minus);
        const double down = ens->gaps(p, q).squaredNorm();
        worst = std::max(worst, std::abs((up - down) / (2 * h) - grad(r, c)));
      }
    }
    ens->set_params(base);
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("estimate_relu_ipm examples") {
  const SampleSet p = points_1d({0.5});
  const SampleSet q = points_1d({-0.5});
  const IpmResult r = estimate_relu_ipm(p, q);
  CHECK(std::abs(r.value - 1.0) < 1e-3);
  CHECK(r.start_values.size() == 100);
  CHECK(r.value == r.start_values.maxCoeff());

  RngStream rng(30, 0);
  const SampleSet a = random_sample(rng, 25, 2, true);
  CHECK(estimate_relu_ipm(a, a, quick()).value < 1e-9);

  const SampleSet x = random_sample(rng, 30, 1, false, -1.0, 0.6);
  const SampleSet y = random_sample(rng, 30, 1, false, -0.4, 1.0);
  CHECK(std::abs(estimate_relu_ipm(x, y).value - exact_relu_ipm_1d(x, y).value) < 1e-3);

  CHECK_THROWS_AS(estimate_relu_ipm(SampleSet(Eigen::MatrixXd(0, 1)), q), Error);
  CHECK_THROWS_AS(estimate_relu_ipm(p, SampleSet(Eigen::MatrixXd::Zero(1, 2))), Error);
}

TEST_CASE("estimate_relu_ipm invariants") {
  RngStream rng(31, 0);
  for (int t = 0; t < 5; ++t) {
    const SampleSet p = random_sample(rng, 20, 3, true, -0.5, 0.5);
    const SampleSet q = random_sample(rng, 15, 3, true, -0.5, 0.5);
    const AscentConfig cfg = quick(30, 400);
    const IpmResult r = estimate_relu_ipm(p, q, cfg);
    const auto& best = std::get<ReluParams>(r.best_params);
    CHECK(best.feasible());
    CHECK(std::abs(std::abs(mean_gap(r.best_params, p, q)) - r.value) < 1e-12);
    CHECK(r.value >= 0.0);
    CHECK(std::abs(estimate_relu_ipm(q, p, cfg).value - r.value) < 1e-6);

    // A few explicit discriminators never beat the estimate by much.
    for (int k = 0; k < 10; ++k) {
      const ReluParams f{project_sphere(standard_normal(rng, 3)), rng.uniform(-1.0, 1.0)};
      CHECK(std::abs(mean_gap(f, p, q)) <= r.value + 1e-2);
    }
  }
}

TEST_CASE("exact 1-D oracle") {
  const SampleSet p = points_1d({0.5});
  const SampleSet q = points_1d({-0.5});
  const ExactIpm e = exact_relu_ipm_1d(p, q);
  CHECK(e.value == doctest::Approx(1.0));
  CHECK(e.params.theta[0] == 1.0);
  CHECK(e.params.mu >= 0.5);
  CHECK(exact_relu_ipm_1d(p, p).value == 0.0);
  CHECK_THROWS_AS(exact_relu_ipm_1d(SampleSet(Eigen::MatrixXd::Zero(1, 2)), SampleSet(Eigen::MatrixXd::Zero(1, 2))),
                  Error);

  // Shifting every point right by delta raises the gap at theta = 1, mu = 1 by delta.
  const SampleSet a = points_1d({-0.3, 0.1, 0.2});
  const SampleSet b = points_1d({-0.25, 0.15, 0.25});
  CHECK(exact_relu_ipm_1d(a, b).value >= 0.05 - 1e-12);

  RngStream rng(40, 0);
  for (int t = 0; t < 100; ++t) {
    const SampleSet x = random_sample(rng, 1 + static_cast<Eigen::Index>(rng.next_u64() % 40), 1, t % 2 == 0);
    const SampleSet y = random_sample(rng, 1 + static_cast<Eigen::Index>(rng.next_u64() % 40), 1, t % 3 == 0);
    const ExactIpm ex = exact_relu_ipm_1d(x, y);
    CHECK(std::abs(ex.value - brute_exact_1d(x, y)) < 1e-12);
    CHECK(std::abs(std::abs(mean_gap(ex.params, x, y)) - ex.value) < 1e-15);
  }
}

TEST_CASE("oracle metric properties") {
  RngStream rng(41, 0);
  for (int t = 0; t < 200; ++t) {
    const SampleSet p = random_sample(rng, 12, 1, true);
    const SampleSet q = random_sample(rng, 9, 1, true);
    const SampleSet r = random_sample(rng, 15, 1, false);
    const double pq = exact_relu_ipm_1d(p, q).value;
    CHECK(pq >= 0.0);
    CHECK(pq == exact_relu_ipm_1d(q, p).value);
    CHECK(exact_relu_ipm_1d(p, p).value == 0.0);
    CHECK(exact_relu_ipm_1d(p, r).value <= pq + exact_relu_ipm_1d(q, r).value + 1e-9);
  }
}

TEST_CASE("grid oracle") {
  RngStream rng(42, 0);
  const SampleSet p = random_sample(rng, 20, 2, false, -0.7, 0.7);
  const SampleSet q = random_sample(rng, 20, 2, false, -0.6, 0.7);
  CHECK(grid_relu_ipm(p, p, 256) == 0.0);
  double prev = 0.0;
  for (Eigen::Index m : {8, 32, 128, 512, 2048}) {
    const double v = grid_relu_ipm(p, q, m);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  const Eigen::MatrixXd dirs = sphere_directions(64, 3);
  CHECK((dirs.rowwise().norm().array() - 1.0).abs().maxCoeff() < 1e-12);
  CHECK(sphere_directions(16, 3) == dirs.topRows(16));
  CHECK_THROWS_AS(grid_relu_ipm(points_1d({0.1}), points_1d({0.2}), 8), Error);

  // The 1-D two-point instance rotated by 30 degrees.
  const double c = std::cos(M_PI / 6), s = std::sin(M_PI / 6);
  Eigen::MatrixXd a(1, 2), b(1, 2);
  a << 0.5 * c, 0.5 * s;
  b << -0.5 * c, -0.5 * s;
  CHECK(std::abs(grid_relu_ipm(SampleSet(a), SampleSet(b), 4096) - 1.0) < 1e-3);
}

TEST_CASE("oracle separates distinct samples") {
  RngStream rng(43, 0);
  for (int t = 0; t < 20; ++t) {
    const Eigen::Index d = 1 + t % 2;
    const SampleSet p = random_sample(rng, 50, d, false, -0.7, 0.7);
    const SampleSet q = random_sample(rng, 50, d, false, -0.7, 0.7);
    const double v = d == 1 ? exact_relu_ipm_1d(p, q).value : grid_relu_ipm(p, q, 1024);
    CHECK(v > 0.0);
    CHECK((d == 1 ? exact_relu_ipm_1d(p, p).value : grid_relu_ipm(p, p, 1024)) == 0.0);
  }
}

TEST_CASE("sigmoid and holder estimators") {
  const SampleSet p = points_1d({0.5});
  const SampleSet q = points_1d({-0.5});
  const IpmResult sig = estimate_sigmoid_ipm(p, q);
  CHECK(sig.value >= 0.9);
  CHECK(sig.value <= 1.0);
  CHECK(estimate_sigmoid_ipm(p, p, quick()).value < 1e-9);

  const IpmResult hol = estimate_holder_nn_ipm(p, q);
  CHECK(hol.value >= 0.5);
  CHECK(hol.value <= 2.0);
  CHECK(std::get<HolderNetParams>(hol.best_params).feasible());
  CHECK(estimate_holder_nn_ipm(p, p, quick()).value < 1e-9);
}

TEST_CASE("kernels") {
  CHECK(kernel_eval(KernelSpec::rbf(10), Eigen::Vector2d(0.3, 0.1), Eigen::Vector2d(0.3, 0.1)) == 1.0);
  CHECK(kernel_eval(KernelSpec::rbf(10), Eigen::Vector2d(0, 0), Eigen::Vector2d(6, 8)) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  // k2(0.5)^2 = 1/576 and k4(0) = (1/16 - 1/8 + 7/240) / 24 = -1/720.
  CHECK(kernel_eval(KernelSpec::sobolev(), Eigen::VectorXd::Constant(1, 0.5), Eigen::VectorXd::Constant(1, 0.5)) ==
        doctest::Approx(1.0 + 1.0 / 576 + 1.0 / 720).epsilon(1e-15));
  CHECK_THROWS_AS(KernelSpec::rbf(0.0), Error);
  CHECK_THROWS_AS(kernel_eval(KernelSpec::sobolev(), Eigen::Vector2d(0, 0), Eigen::Vector3d(0, 0, 0)), Error);
}

TEST_CASE("mmd matches brute force") {
  RngStream rng(50, 0);
  for (const KernelSpec k : {KernelSpec::rbf(10.0), KernelSpec::sobolev()}) {
    for (int t = 0; t < 10; ++t) {
      const SampleSet p = random_sample(rng, 20, 3, true, 0.0, 1.0);
      const SampleSet q = random_sample(rng, 17, 3, true, 0.0, 1.0);
      const double fast = mmd_squared(p, q, k);
      const double slow = static_cast<double>(brute_mmd2(p, q, k));
      CHECK(std::abs(fast - slow) <= 1e-12 * std::abs(slow));
      CHECK(mmd_squared(p, p, k) <= 1e-12);
    }
    Eigen::MatrixXd x(1, 2), y(1, 2);
    x << 0.2, 0.7;
    y << 0.9, 0.1;
    const double single = kernel_eval(k, x.row(0).transpose(), x.row(0).transpose()) -
                          2 * kernel_eval(k, x.row(0).transpose(), y.row(0).transpose()) +
                          kernel_eval(k, y.row(0).transpose(), y.row(0).transpose());
    CHECK(mmd_squared(SampleSet(x), SampleSet(y), k) == doctest::Approx(single).epsilon(1e-14));
  }
}
