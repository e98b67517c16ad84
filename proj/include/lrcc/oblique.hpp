#pragma once

#include "lrcc/types.hpp"

namespace lrcc {

/// A point of the oblique manifold OB(p, k): a p x k matrix with unit-norm rows.
///
/// Points stand for their orbit {W O : O orthogonal} in the quotient OB(p, k) / O(k).
/// Tangent vectors at a point are plain p x k matrices; use oblique::is_tangent and
/// oblique::is_horizontal to check them.
class ObliqueFactor {
 public:
  static constexpr double kMembershipTol = 1e-12;

  /// Validates 1 <= k <= p and unit rows within kMembershipTol.
  explicit ObliqueFactor(Matrix entries);

  /// Row-normalizes z. Throws ZeroRow on a row with norm below 1e-300.
  static ObliqueFactor project(const Matrix& z);

  const Matrix& matrix() const noexcept { return entries_; }
  Index p() const noexcept { return entries_.rows(); }
  Index k() const noexcept { return entries_.cols(); }

 private:
  struct Trusted {};
  ObliqueFactor(Matrix entries, Trusted) noexcept : entries_(std::move(entries)) {}

  Matrix entries_;
};

namespace oblique {

constexpr double kHorizontalTol = 1e-10;

inline ObliqueFactor project_to_manifold(const Matrix& z) { return ObliqueFactor::project(z); }

/// Z - ddiag(Z W^T) W.
Matrix tangent_project(const ObliqueFactor& w, const Matrix& z);

/// Projection onto the horizontal space at w, i.e. xi - W Omega with Omega skew-symmetric
/// solving W^T xi - xi^T W = W^T W Omega + Omega W^T W.
Matrix horizontal_project(const ObliqueFactor& w, const Matrix& xi);

/// P(W + t xi).
ObliqueFactor retract(const ObliqueFactor& w, const Matrix& xi, double t);

/// Carries xi to the horizontal space at `to` by tangent then horizontal projection.
Matrix transport(const ObliqueFactor& from, const ObliqueFactor& to, const Matrix& xi);

/// tr(xi^T eta).
double metric(const ObliqueFactor& w, const Matrix& xi, const Matrix& eta);

bool is_tangent(const ObliqueFactor& w, const Matrix& xi,
                double tol = ObliqueFactor::kMembershipTol);
bool is_horizontal(const ObliqueFactor& w, const Matrix& xi, double tol = kHorizontalTol);

/// Caches the eigendecomposition of W^T W so that several horizontal projections at
/// the same point cost O(pk^2) each after an O(pk^2 + k^3) setup.
class HorizontalProjector {
 public:
  explicit HorizontalProjector(const ObliqueFactor& w);

  /// The skew-symmetric Omega of the vertical component W Omega of xi.
  /// Throws SylvesterSingular when W^T W is singular in a direction the right-hand
  /// side excites.
  Matrix vertical_generator(const Matrix& xi) const;

  Matrix project(const Matrix& xi) const;

 private:
  ObliqueFactor w_;
  Matrix eigenvectors_;
  Vector eigenvalues_;
};

}  // namespace oblique
}  // namespace lrcc
