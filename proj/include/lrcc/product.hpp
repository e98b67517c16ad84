#pragma once

#include <memory>

#include "lrcc/oblique.hpp"
#include "lrcc/scale.hpp"

namespace lrcc {

/// A point (W, sigma) of (OB(p,k) / O(k)) x R_{++}^p. Immutable; copies share storage,
/// which also gives tangent vectors a cheap identity check on their base point.
class ProductPoint {
 public:
  ProductPoint(ObliqueFactor w, ScaleVector sigma);

  const ObliqueFactor& w() const noexcept { return state_->w; }
  const ScaleVector& sigma() const noexcept { return state_->sigma; }
  Index p() const noexcept { return state_->w.p(); }
  Index k() const noexcept { return state_->w.k(); }

  /// Same storage, or equal entries.
  bool same_as(const ProductPoint& other) const;

 private:
  struct State {
    ObliqueFactor w;
    ScaleVector sigma;
  };
  std::shared_ptr<const State> state_;
};

/// Tangent representative (xi_W, xi_sigma) at `base`. xi_W is expected to be horizontal;
/// arithmetic does not re-project, see reproject().
class TangentPair {
 public:
  TangentPair(ProductPoint base, Matrix w_part, Vector sigma_part);

  static TangentPair zero(const ProductPoint& base);

  const ProductPoint& base() const noexcept { return base_; }
  const Matrix& w_part() const noexcept { return w_part_; }
  const Vector& sigma_part() const noexcept { return sigma_part_; }

  /// a * u + b * v, same base required.
  static TangentPair combine(double a, const TangentPair& u, double b, const TangentPair& v);
  TangentPair scaled(double a) const;

 private:
  ProductPoint base_;
  Matrix w_part_;
  Vector sigma_part_;
};

double metric_product(const ProductPoint& x, const TangentPair& u, const TangentPair& v);
double norm_product(const ProductPoint& x, const TangentPair& u);

/// (P_W(eg_W), sigma^2 . eg_sigma). The W part is horizontal whenever the objective is
/// invariant under W -> W O, so no horizontal projection is applied.
TangentPair rgrad_product(const ProductPoint& x, const Matrix& eg_w, const Vector& eg_sigma);

ProductPoint retract_product(const ProductPoint& x, const TangentPair& u, double t);

TangentPair transport_product(const ProductPoint& x, const ProductPoint& x_bar,
                              const TangentPair& u);
/// Same, reusing a projector built at x_bar.
TangentPair transport_product(const ProductPoint& x, const ProductPoint& x_bar,
                              const TangentPair& u,
                              const oblique::HorizontalProjector& projector_at_x_bar);

/// Re-applies the horizontal projection to the W part (after linear combinations).
TangentPair reproject(const TangentPair& u, const oblique::HorizontalProjector& projector);

bool is_valid_tangent(const TangentPair& u, double tol = oblique::kHorizontalTol);
bool is_valid_point(const ProductPoint& x, double row_tol = ObliqueFactor::kMembershipTol);

}  // namespace lrcc
