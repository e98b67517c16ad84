#include "doctest.h"

#include "lrcc/errors.hpp"
#include "lrcc/oblique.hpp"
#include "oracles.hpp"

using namespace lrcc;
namespace ob = lrcc::oblique;

namespace {

ObliqueFactor random_factor(Index p, Index k, CounterRng& rng) {
  return ObliqueFactor(oracle::unit_rows(oracle::gaussian(p, k, rng)));
}

Matrix random_tangent(const ObliqueFactor& w, CounterRng& rng) {
  return ob::tangent_project(w, oracle::gaussian(w.p(), w.k(), rng));
}

}  // namespace

TEST_CASE("factor construction validates shape and unit rows") {
  CHECK_NOTHROW(ObliqueFactor(Matrix::Identity(3, 3)));
  CHECK_THROWS_AS(ObliqueFactor(Matrix::Ones(3, 2)), Error);
  CHECK_THROWS_AS(ObliqueFactor(Matrix(2, 3)), Error);  // k > p
  try {
    ObliqueFactor::project(Matrix::Zero(2, 2));
    FAIL("expected ZeroRow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroRow);
  }
}

TEST_CASE("project_to_manifold") {
  CounterRng rng(1);
  SUBCASE("identity on the manifold") {
    const Matrix w = oracle::unit_rows(oracle::gaussian(5, 3, rng));
    CHECK((ob::project_to_manifold(w).matrix() - w).norm() < 1e-15);
  }
  SUBCASE("row [3, 4]") {
    Matrix z(2, 2);
    z << 3, 4, 0, 2;
    const Matrix w = ob::project_to_manifold(z).matrix();
    CHECK(w(0, 0) == doctest::Approx(0.6));
    CHECK(w(0, 1) == doctest::Approx(0.8));
    CHECK(w(1, 1) == 1.0);
  }
  SUBCASE("random 8x3: unit rows and orthogonal equivariance") {
    const Matrix z = oracle::gaussian(8, 3, rng);
    const Matrix o = oracle::orthogonal(3, rng);
    const Matrix w = ob::project_to_manifold(z).matrix();
    for (Index i = 0; i < 8; ++i) CHECK(std::abs(w.row(i).norm() - 1.0) < 1e-14);
    CHECK((ob::project_to_manifold(z * o).matrix() - w * o).norm() < 1e-12);
  }
}

TEST_CASE("tangent_project") {
  CounterRng rng(2);
  const ObliqueFactor w = random_factor(6, 2, rng);
  SUBCASE("W maps to zero") { CHECK(ob::tangent_project(w, w.matrix()).norm() < 1e-14); }
  SUBCASE("idempotent") {
    for (int t = 0; t < 10; ++t) {
      const Matrix xi = random_tangent(w, rng);
      CHECK((ob::tangent_project(w, xi) - xi).norm() < 1e-12);
      CHECK(ob::is_tangent(w, xi));
    }
  }
  SUBCASE("matches the constrained least-squares oracle") {
    for (int t = 0; t < 10; ++t) {
      const Matrix z = oracle::gaussian(6, 2, rng);
      CHECK((ob::tangent_project(w, z) - oracle::tangent_projection_lsq(w.matrix(), z)).norm() < 1e-10);
    }
  }
  SUBCASE("shape mismatch") {
    try {
      ob::tangent_project(w, Matrix::Zero(5, 2));
      FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DimensionMismatch);
    }
  }
}

TEST_CASE("horizontal_project") {
  CounterRng rng(3);
  SUBCASE("already horizontal input is unchanged") {
    const ObliqueFactor w = random_factor(7, 3, rng);
    const Matrix h = ob::horizontal_project(w, random_tangent(w, rng));
    CHECK((ob::horizontal_project(w, h) - h).norm() < 1e-12);
  }
  SUBCASE("vertical vectors vanish") {
    const ObliqueFactor w = random_factor(7, 3, rng);
    const Matrix vertical = w.matrix() * oracle::skew(3, rng);
    CHECK(ob::is_tangent(w, vertical, 1e-12));
    CHECK(ob::horizontal_project(w, vertical).norm() < 1e-10);
  }
  SUBCASE("random 7x3 against the Kronecker oracle") {
    for (int t = 0; t < 20; ++t) {
      const ObliqueFactor w = random_factor(7, 3, rng);
      const Matrix xi = random_tangent(w, rng);
      const Matrix h = ob::horizontal_project(w, xi);
      CHECK((h - oracle::horizontal_projection_kron(w.matrix(), xi)).norm() < 1e-10);
      CHECK(ob::is_horizontal(w, h));
    }
  }
  SUBCASE("decomposition into metric-orthogonal parts") {
    const ObliqueFactor w = random_factor(9, 4, rng);
    const Matrix xi = random_tangent(w, rng);
    const ob::HorizontalProjector proj(w);
    const Matrix omega = proj.vertical_generator(xi);
    CHECK((omega + omega.transpose()).norm() < 1e-12);
    const Matrix h = proj.project(xi);
    CHECK((xi - h - w.matrix() * omega).norm() < 1e-12);
    CHECK(std::abs(ob::metric(w, h, w.matrix() * omega)) < 1e-10);
  }
  SUBCASE("nearly rank-one W flags SylvesterSingular") {
    // Rows e1 + 1e-8 a_i: two eigenvalues of W^T W near 1e-16 while a generic tangent
    // still excites the corresponding block of the right-hand side.
    Matrix z(6, 3);
    for (Index i = 0; i < 6; ++i) z.row(i) << 1.0, 1e-8 * rng.normal(), 1e-8 * rng.normal();
    const ObliqueFactor w = ob::project_to_manifold(z);
    const Matrix xi = 100.0 * random_tangent(w, rng);
    try {
      ob::horizontal_project(w, xi);
      FAIL("expected SylvesterSingular");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SylvesterSingular);
    }
  }
}

TEST_CASE("retract") {
  CounterRng rng(4);
  const ObliqueFactor w = random_factor(8, 3, rng);
  const Matrix xi = random_tangent(w, rng);
  SUBCASE("t = 0 is exact") { CHECK(ob::retract(w, xi, 0.0).matrix() == w.matrix()); }
  SUBCASE("orthogonal equivariance") {
    const Matrix o = oracle::orthogonal(3, rng);
    const ObliqueFactor wo(w.matrix() * o);
    CHECK((ob::retract(wo, xi * o, 0.7).matrix() - ob::retract(w, xi, 0.7).matrix() * o).norm() < 1e-12);
  }
  SUBCASE("first order: the defect shrinks like t^2") {
    const Matrix u = xi / xi.norm();
    std::vector<double> defects;
    for (double t : {1e-2, 1e-3, 1e-4})
      defects.push_back((ob::retract(w, u, t).matrix() - w.matrix() - t * u).norm() / t);
    for (std::size_t i = 1; i < defects.size(); ++i) {
      const double slope = std::log10(defects[i - 1] / defects[i]);
      CHECK(slope == doctest::Approx(1.0).epsilon(0.05));
    }
  }
}

TEST_CASE("transport") {
  CounterRng rng(5);
  const ObliqueFactor w = random_factor(8, 3, rng);
  const Matrix xi = ob::horizontal_project(w, random_tangent(w, rng));
  SUBCASE("same point leaves horizontal vectors alone") {
    CHECK((ob::transport(w, w, xi) - xi).norm() < 1e-12);
  }
  SUBCASE("zero stays zero") { CHECK(ob::transport(w, w, Matrix::Zero(8, 3)).norm() == 0.0); }
  SUBCASE("result is horizontal at the target") {
    for (int t = 0; t < 10; ++t) {
      const ObliqueFactor target = ob::retract(w, random_tangent(w, rng), 0.3);
      const Matrix moved = ob::transport(w, target, xi);
      CHECK(ob::is_tangent(target, moved, 1e-10));
      CHECK(ob::is_horizontal(target, moved, 1e-10));
    }
  }
}

TEST_CASE("metric") {
  CounterRng rng(6);
  const ObliqueFactor w = random_factor(6, 3, rng);
  const Matrix xi = random_tangent(w, rng), eta = random_tangent(w, rng);
  CHECK(ob::metric(w, xi, Matrix::Zero(6, 3)) == 0.0);
  CHECK(ob::metric(w, xi, eta) == doctest::Approx(ob::metric(w, eta, xi)));
  CHECK(ob::metric(w, xi, xi) > 0.0);
  const Matrix o = oracle::orthogonal(3, rng);
  CHECK(std::abs(ob::metric(ObliqueFactor(w.matrix() * o), xi * o, eta * o) - ob::metric(w, xi, eta)) < 1e-12);
  Matrix e11 = Matrix::Zero(6, 3);
  e11(0, 0) = 1.0;
  const Matrix pe = ob::tangent_project(w, e11);
  const Matrix oracle_pe = oracle::tangent_projection_lsq(w.matrix(), e11);
  CHECK(ob::metric(w, pe, pe) == doctest::Approx(oracle_pe.squaredNorm()).epsilon(1e-12));
  CHECK_THROWS_AS(ob::metric(w, xi, Matrix::Zero(5, 3)), Error);
}
