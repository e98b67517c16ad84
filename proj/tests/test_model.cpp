#include "doctest.h"

#include "lrcc/errors.hpp"
#include "lrcc/model.hpp"
#include "oracles.hpp"

using namespace lrcc;

namespace {

struct Instance {
  ObliqueFactor w;
  ScaleVector sigma;
  Matrix theta;
};

Instance random_instance(Index p, Index k, CounterRng& rng) {
  ObliqueFactor w(oracle::unit_rows(oracle::gaussian(p, k, rng)));
  ScaleVector s(oracle::positive(p, rng));
  Matrix theta = oracle::precision(w.matrix(), s.vector());
  return {std::move(w), std::move(s), std::move(theta)};
}

Matrix symmetric(Index p, CounterRng& rng) {
  const Matrix a = oracle::gaussian(p, p, rng);
  return 0.5 * (a + a.transpose());
}

}  // namespace

TEST_CASE("SampleSet") {
  CounterRng rng(1);
  const Matrix x = oracle::gaussian(6, 9, rng);
  const Matrix s_oracle = x * x.transpose() / 9.0;
  for (auto form : {SampleSet::Form::Dense, SampleSet::Form::Factored}) {
    const SampleSet s = SampleSet::from_data(x, form);
    CHECK(s.p() == 6);
    CHECK(s.n() == 9);
    CHECK((s.covariance() - s_oracle).norm() < 1e-12);
    CHECK((s.diagonal() - s_oracle.diagonal()).norm() < 1e-12);
    const Matrix a = oracle::gaussian(6, 3, rng);
    CHECK((s.apply(a) - s_oracle * a).norm() < 1e-12);
  }
  CHECK(SampleSet::from_data(oracle::gaussian(10, 20, rng)).dense());
  CHECK(!SampleSet::from_data(oracle::gaussian(100, 20, rng)).dense());
  Matrix asym = Matrix::Identity(3, 3);
  asym(0, 1) = 0.5;
  CHECK_THROWS_AS(SampleSet::from_covariance(asym, 5), Error);
}

TEST_CASE("assemble_precision") {
  CounterRng rng(2);
  SUBCASE("identity") {
    const PrecisionModel m(ObliqueFactor(Matrix::Identity(4, 4)), ScaleVector(Vector::Ones(4)));
    CHECK(m.dense().isApprox(Matrix::Identity(4, 4)));
  }
  SUBCASE("orbit invariance") {
    const Instance in = random_instance(7, 3, rng);
    const Matrix o = oracle::orthogonal(3, rng);
    const PrecisionModel a(in.w, in.sigma), b(ObliqueFactor(in.w.matrix() * o), in.sigma);
    CHECK((a.dense() - b.dense()).norm() < 1e-12);
  }
  SUBCASE("random p=6, k=2 against the triple product") {
    const Instance in = random_instance(6, 2, rng);
    const PrecisionModel m = assemble_precision(in.w, in.sigma);
    CHECK((m.dense() - in.theta).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((m.gram() - in.w.matrix().transpose() * in.sigma.vector().array().square().matrix().asDiagonal() * in.w.matrix()).norm() < 1e-12);
    CHECK((m.gram_w() - in.w.matrix().transpose() * in.w.matrix()).norm() < 1e-12);
    for (Index q = 0; q < 6; ++q) CHECK(m.entry(q, q) == doctest::Approx(in.sigma(q) * in.sigma(q)));
  }
  SUBCASE("shape mismatch and dense cap") {
    const Instance in = random_instance(5, 2, rng);
    CHECK_THROWS_AS(PrecisionModel(in.w, ScaleVector(Vector::Ones(4))), Error);
    CHECK_THROWS_AS(PrecisionModel(in.w, in.sigma).dense(4), Error);
  }
}

TEST_CASE("conditional_correlation") {
  CounterRng rng(3);
  Matrix w = Matrix::Zero(3, 2);
  w << 1, 0, 0, 1, 1, 0;
  const PrecisionModel m(ObliqueFactor(w), ScaleVector(oracle::positive(3, rng)));
  CHECK(m.conditional_correlation(0, 1) == 0.0);
  CHECK(m.conditional_correlation(0, 2) == doctest::Approx(-1.0));

  const Instance in = random_instance(6, 3, rng);
  const PrecisionModel r(in.w, in.sigma);
  for (Index q = 0; q < 6; ++q)
    for (Index l = 0; l < 6; ++l) {
      if (q == l) continue;
      const double eq1 = -in.theta(q, l) / std::sqrt(in.theta(q, q) * in.theta(l, l));
      CHECK(std::abs(r.conditional_correlation(q, l) - eq1) < 1e-13);
    }
  try {
    r.conditional_correlation(0, 6);
    FAIL("expected IndexOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IndexOutOfRange);
  }
}

TEST_CASE("log-cosh penalty") {
  CounterRng rng(4);
  CHECK(log_cosh_penalty(0.0, 0.1) == 0.0);
  CHECK(log_cosh_penalty(0.01, 0.01) == doctest::Approx(0.433781 * 0.01).epsilon(1e-6));
  CHECK(log_cosh_penalty(1e6, 1e-3) == doctest::Approx(1e6 - 1e-3 * std::log(2.0)));  // no overflow
  CHECK(log_cosh_penalty(-3.0, 0.5) == log_cosh_penalty(3.0, 0.5));

  SUBCASE("midpoint convexity") {
    for (double a = -2; a <= 2; a += 0.25)
      for (double b = -2; b <= 2; b += 0.25)
        CHECK(log_cosh_penalty(0.5 * (a + b), 0.3) <=
              0.5 * (log_cosh_penalty(a, 0.3) + log_cosh_penalty(b, 0.3)) + 1e-15);
  }
  SUBCASE("diagonal precision has no penalty") {
    const PrecisionModel m(ObliqueFactor(Matrix::Identity(5, 5)), ScaleVector(oracle::positive(5, rng)));
    CHECK(penalty_value(m, 0.1) == 0.0);
    CHECK(penalty_gradient(m, 0.1).norm() == 0.0);
  }
  SUBCASE("l1 limit") {
    const Instance in = random_instance(8, 3, rng);
    const PrecisionModel m(in.w, in.sigma);
    double l1 = 0;
    for (Index i = 0; i < 8; ++i)
      for (Index j = 0; j < 8; ++j)
        if (i != j) l1 += std::abs(in.theta(i, j));
    CHECK(std::abs(penalty_value(m, 1e-3) - l1) < 1e-2 * l1);
    CHECK(std::abs(penalty_value(m, 0.2) - oracle::dense_penalty(in.theta, 0.2)) < 1e-12 * l1);
  }
  SUBCASE("gradient entries") {
    Matrix w(2, 1);
    w << 1, 1;
    const double eps = 0.25;
    const PrecisionModel m(ObliqueFactor(w), ScaleVector(Vector::Constant(2, std::sqrt(eps))));
    const Matrix g = penalty_gradient(m, eps);
    CHECK(g(0, 1) == doctest::Approx(0.761594).epsilon(1e-6));
    CHECK(g(0, 0) == 0.0);
  }
  SUBCASE("gradient matches finite differences of the penalty") {
    const Matrix theta = symmetric(5, rng);
    const double eps = 0.3;
    Matrix grad = (theta / eps).array().tanh().matrix();
    grad.diagonal().setZero();
    for (int t = 0; t < 5; ++t) {
      const Matrix e = symmetric(5, rng);
      const double fd = oracle::central_difference(
          [&](double h) { return oracle::dense_penalty(theta + h * e, eps); }, 1e-6);
      const double an = (grad.cwiseProduct(e)).sum();
      CHECK(std::abs(fd - an) < 1e-6 * std::max(1.0, std::abs(an)));
    }
    const Instance in = random_instance(5, 2, rng);
    Matrix lib = penalty_gradient(PrecisionModel(in.w, in.sigma), eps);
    Matrix ref = (in.theta / eps).array().tanh().matrix();
    ref.diagonal().setZero();
    CHECK((lib - ref).norm() < 1e-14);
    CHECK((lib - lib.transpose()).norm() == 0.0);
    CHECK(lib.cwiseAbs().maxCoeff() < 1.0);
  }
}

TEST_CASE("tiled penalty sweep matches the dense computation") {
  CounterRng rng(5);
  const Instance in = random_instance(37, 4, rng);
  const PrecisionModel m(in.w, in.sigma);
  const double eps = 0.05;
  const Matrix ref_grad = penalty_gradient(m, eps) * m.factor();
  const double ref_value = oracle::dense_penalty(in.theta, eps);
  for (Index tile : {1, 5, 16, 37, 256}) {
    for (int threads : {1, 3}) {
      const PenaltySweep sweep = penalty_sweep(m.factor(), eps, true, {threads, tile});
      CHECK(std::abs(sweep.value - ref_value) < 1e-12 * ref_value);
      CHECK((sweep.grad_times_factor - ref_grad).norm() < 1e-12 * ref_grad.norm());
    }
  }
  const PenaltySweep a = penalty_sweep(m.factor(), eps, true, {1, 8});
  const PenaltySweep b = penalty_sweep(m.factor(), eps, true, {1, 8});
  CHECK(a.value == b.value);
  CHECK(a.grad_times_factor == b.grad_times_factor);
}

TEST_CASE("logdet_k") {
  CounterRng rng(6);
  CHECK(PrecisionModel(ObliqueFactor(Matrix::Identity(4, 4)), ScaleVector(Vector::Ones(4))).logdet_k() ==
        doctest::Approx(0.0));
  SUBCASE("scaling identity") {
    const Instance in = random_instance(7, 3, rng);
    const double c = 1.7;
    const PrecisionModel m(in.w, ScaleVector(Vector::Constant(7, c)));
    const double expected = 2 * 3 * std::log(c) + std::log((in.w.matrix().transpose() * in.w.matrix()).determinant());
    CHECK(m.logdet_k() == doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("random p=8, k=3 against dense eigenvalues") {
    for (int t = 0; t < 20; ++t) {
      const Instance in = random_instance(8, 3, rng);
      CHECK(std::abs(PrecisionModel(in.w, in.sigma).logdet_k() - oracle::logdet_top_k(in.theta, 3)) < 1e-10);
    }
  }
  SUBCASE("rank deficiency") {
    Matrix w(4, 2);
    w << 1, 0, 1, 0, -1, 0, 1, 0;  // both columns collinear -> rank 1
    const PrecisionModel m(ObliqueFactor(w), ScaleVector(Vector::Ones(4)));
    CHECK(m.rank_deficient());
    try {
      m.logdet_k();
      FAIL("expected RankDeficient");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::RankDeficient);
    }
  }
}

TEST_CASE("objective_value") {
  CounterRng rng(7);
  SUBCASE("identity point gives half the trace") {
    const SampleSet s = SampleSet::from_data(oracle::gaussian(5, 8, rng));
    CHECK(objective_value(ObliqueFactor(Matrix::Identity(5, 5)), ScaleVector(Vector::Ones(5)), s, {0.0, 1e-2, 5}) ==
          doctest::Approx(0.5 * s.trace()));
  }
  SUBCASE("dense oracle") {
    for (auto form : {SampleSet::Form::Dense, SampleSet::Form::Factored}) {
      for (double lambda : {0.0, 0.4}) {
        const Instance in = random_instance(7, 3, rng);
        const SampleSet s = SampleSet::from_data(oracle::gaussian(7, 5, rng), form);
        const double lib = objective_value(in.w, in.sigma, s, {lambda, 0.1, 3});
        const double ref = oracle::dense_objective(in.theta, s.covariance(), 3, lambda, 0.1);
        CHECK(std::abs(lib - ref) < 1e-10 * std::max(1.0, std::abs(ref)));
      }
    }
  }
  SUBCASE("rank-deficient point is +inf") {
    Matrix dup(4, 2);
    dup << 1, 1, -1, -1, 1, 1, 1, 1;  // duplicated columns
    dup = oracle::unit_rows(dup);
    const SampleSet s = SampleSet::from_data(oracle::gaussian(4, 6, rng));
    CHECK(std::isinf(objective_value(ObliqueFactor(dup), ScaleVector(Vector::Ones(4)), s, {0.0, 1e-2, 2})));
  }
}

TEST_CASE("pseudo_inverse") {
  CounterRng rng(8);
  CHECK(PrecisionModel(ObliqueFactor(Matrix::Identity(3, 3)), ScaleVector(Vector::Ones(3))).pseudo_inverse().isApprox(Matrix::Identity(3, 3)));
  for (int t = 0; t < 20; ++t) {
    const Index p = 4 + static_cast<Index>(rng.uniform_index(9));
    const Index k = 1 + static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(p - 1)));
    const Instance in = random_instance(p, k, rng);
    const PrecisionModel m(in.w, in.sigma);
    const Matrix pinv = m.pseudo_inverse();
    const Matrix ref = oracle::svd_pinv(in.theta);
    CHECK((pinv - ref).cwiseAbs().maxCoeff() < 1e-9 * std::max(1.0, ref.cwiseAbs().maxCoeff()));
    const Matrix& a = in.theta;
    CHECK((a * pinv * a - a).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((pinv * a * pinv - pinv).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(((a * pinv).transpose() - a * pinv).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(((pinv * a).transpose() - pinv * a).cwiseAbs().maxCoeff() < 1e-9);
    const auto f = m.pseudo_inverse_factored();
    CHECK((f.outer * f.core * f.outer.transpose() - pinv).norm() < 1e-10 * pinv.norm());
  }
}

TEST_CASE("euclidean_grad_theta") {
  CounterRng rng(9);
  SUBCASE("stationary at Theta = S for full rank") {
    const Instance in = random_instance(5, 5, rng);
    const SampleSet s = SampleSet::from_covariance(oracle::svd_pinv(in.theta), 10);
    CHECK(euclidean_grad_theta(PrecisionModel(in.w, in.sigma), s, {0.0, 1e-2, 5}).norm() < 1e-9);
  }
  SUBCASE("finite differences along symmetric perturbations") {
    for (Index k : {5, 3}) {
      const Instance in = random_instance(5, k, rng);
      const SampleSet s = SampleSet::from_data(oracle::gaussian(5, 7, rng));
      const ObjectiveConfig cfg{0.3, 0.2, k};
      const Matrix g = euclidean_grad_theta(PrecisionModel(in.w, in.sigma), s, cfg);
      CHECK((g - g.transpose()).norm() < 1e-12);
      for (int t = 0; t < 5; ++t) {
        // Perturbations within the range of Theta keep its rank at k.
        const Matrix b = oracle::gaussian(k, k, rng);
        const Matrix a = in.sigma.vector().asDiagonal() * in.w.matrix();
        const Matrix e = a * (b + b.transpose()) * a.transpose();
        const double fd = oracle::central_difference(
            [&](double h) { return oracle::dense_objective(in.theta + h * e, s.covariance(), k, cfg.lambda, cfg.epsilon); },
            1e-6);
        const double an = g.cwiseProduct(e).sum();
        CHECK(std::abs(fd - an) < 1e-6 * std::max(1.0, std::abs(an)));
      }
    }
  }
  SUBCASE("linear in lambda") {
    const Instance in = random_instance(6, 2, rng);
    const SampleSet s = SampleSet::from_data(oracle::gaussian(6, 9, rng));
    const PrecisionModel m(in.w, in.sigma);
    const Matrix g0 = euclidean_grad_theta(m, s, {0.0, 0.1, 2});
    const Matrix g1 = euclidean_grad_theta(m, s, {0.7, 0.1, 2});
    CHECK((g1 - g0 - 0.7 * penalty_gradient(m, 0.1)).norm() < 1e-12);
  }
}

TEST_CASE("chain_rule_grads") {
  CounterRng rng(10);
  const Instance in = random_instance(7, 3, rng);
  const EuclideanGradient zero = chain_rule_grads(in.w, in.sigma, Matrix::Zero(7, 7));
  CHECK(zero.w.norm() == 0.0);
  CHECK(zero.sigma.norm() == 0.0);

  const Matrix g = symmetric(7, rng);
  const EuclideanGradient eg = chain_rule_grads(in.w, in.sigma, g);
  const Matrix& w = in.w.matrix();
  const Vector& s = in.sigma.vector();
  for (int t = 0; t < 10; ++t) {
    const Matrix xw = oracle::gaussian(7, 3, rng);
    const Vector xs = oracle::gaussian(7, rng);
    // D phi[xw, xs] for phi(W, s) = diag(s) W W^T diag(s).
    const Matrix dphi = xs.asDiagonal() * w * w.transpose() * s.asDiagonal() +
                        s.asDiagonal() * (xw * w.transpose() + w * xw.transpose()) * s.asDiagonal() +
                        s.asDiagonal() * w * w.transpose() * xs.asDiagonal();
    const double lhs = g.cwiseProduct(dphi).sum();
    const double rhs = eg.w.cwiseProduct(xw).sum() + eg.sigma.dot(xs);
    CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("LrccObjective evaluate agrees with the dense pipeline") {
  CounterRng rng(11);
  for (auto form : {SampleSet::Form::Dense, SampleSet::Form::Factored}) {
    const Instance in = random_instance(9, 3, rng);
    const SampleSet s = SampleSet::from_data(oracle::gaussian(9, 4, rng), form);
    const ObjectiveConfig cfg{0.25, 0.05, 3};
    const LrccObjective f(s, cfg);
    const ProductPoint x(in.w, in.sigma);
    const auto ev = f.evaluate(x);
    CHECK(ev.value == doctest::Approx(objective_value(in.w, in.sigma, s, cfg)).epsilon(1e-12));
    const EuclideanGradient ref =
        chain_rule_grads(in.w, in.sigma, euclidean_grad_theta(PrecisionModel(in.w, in.sigma), s, cfg));
    CHECK((ev.egrad.w - ref.w).norm() < 1e-10 * ref.w.norm());
    CHECK((ev.egrad.sigma - ref.sigma).norm() < 1e-10 * ref.sigma.norm());
  }
}
