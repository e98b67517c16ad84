#include "lrcc/product.hpp"

#include <cmath>

#include "lrcc/errors.hpp"

namespace lrcc {

ProductPoint::ProductPoint(ObliqueFactor w, ScaleVector sigma) {
  require(w.p() == sigma.size(), ErrorCode::DimensionMismatch,
          "product point: W has " + std::to_string(w.p()) + " rows but sigma has " +
              std::to_string(sigma.size()) + " entries");
  state_ = std::make_shared<const State>(State{std::move(w), std::move(sigma)});
}

bool ProductPoint::same_as(const ProductPoint& other) const {
  if (state_ == other.state_) return true;
  return w().matrix() == other.w().matrix() && sigma().vector() == other.sigma().vector();
}

TangentPair::TangentPair(ProductPoint base, Matrix w_part, Vector sigma_part)
    : base_(std::move(base)), w_part_(std::move(w_part)), sigma_part_(std::move(sigma_part)) {
  require(w_part_.rows() == base_.p() && w_part_.cols() == base_.k() &&
              sigma_part_.size() == base_.p(),
          ErrorCode::DimensionMismatch, "tangent pair shape does not match its base point");
}

TangentPair TangentPair::zero(const ProductPoint& base) {
  return TangentPair(base, Matrix::Zero(base.p(), base.k()), Vector::Zero(base.p()));
}

TangentPair TangentPair::combine(double a, const TangentPair& u, double b, const TangentPair& v) {
  require(u.base().same_as(v.base()), ErrorCode::BaseMismatch,
          "linear combination of tangents at different points");
  return TangentPair(u.base(), a * u.w_part() + b * v.w_part(),
                     a * u.sigma_part() + b * v.sigma_part());
}

TangentPair TangentPair::scaled(double a) const {
  return TangentPair(base_, a * w_part_, a * sigma_part_);
}

double metric_product(const ProductPoint& x, const TangentPair& u, const TangentPair& v) {
  require(u.base().same_as(x) && v.base().same_as(x), ErrorCode::BaseMismatch,
          "metric_product: tangents are not based at the given point");
  return oblique::metric(x.w(), u.w_part(), v.w_part()) +
         metric_pos(x.sigma(), u.sigma_part(), v.sigma_part());
}

double norm_product(const ProductPoint& x, const TangentPair& u) {
  return std::sqrt(std::max(0.0, metric_product(x, u, u)));
}

TangentPair rgrad_product(const ProductPoint& x, const Matrix& eg_w, const Vector& eg_sigma) {
  return TangentPair(x, oblique::tangent_project(x.w(), eg_w),
                     egrad_to_rgrad_pos(x.sigma(), eg_sigma));
}

ProductPoint retract_product(const ProductPoint& x, const TangentPair& u, double t) {
  require(u.base().same_as(x), ErrorCode::BaseMismatch, "retract_product: foreign tangent");
  if (t == 0.0) return x;
  return ProductPoint(oblique::retract(x.w(), u.w_part(), t),
                      retract_pos(x.sigma(), u.sigma_part(), t));
}

TangentPair transport_product(const ProductPoint& x, const ProductPoint& x_bar,
                              const TangentPair& u,
                              const oblique::HorizontalProjector& projector_at_x_bar) {
  require(u.base().same_as(x), ErrorCode::BaseMismatch, "transport_product: foreign tangent");
  require(x.p() == x_bar.p() && x.k() == x_bar.k(), ErrorCode::DimensionMismatch,
          "transport_product: points of different shape");
  Matrix w_part = projector_at_x_bar.project(oblique::tangent_project(x_bar.w(), u.w_part()));
  return TangentPair(x_bar, std::move(w_part),
                     transport_pos(x.sigma(), x_bar.sigma(), u.sigma_part()));
}

TangentPair transport_product(const ProductPoint& x, const ProductPoint& x_bar,
                              const TangentPair& u) {
  return transport_product(x, x_bar, u, oblique::HorizontalProjector(x_bar.w()));
}

TangentPair reproject(const TangentPair& u, const oblique::HorizontalProjector& projector) {
  return TangentPair(u.base(), projector.project(u.w_part()), u.sigma_part());
}

bool is_valid_tangent(const TangentPair& u, double tol) {
  return oblique::is_horizontal(u.base().w(), u.w_part(), tol) && u.sigma_part().allFinite();
}

bool is_valid_point(const ProductPoint& x, double row_tol) {
  const Matrix& w = x.w().matrix();
  for (Index i = 0; i < w.rows(); ++i) {
    if (std::abs(w.row(i).norm() - 1.0) > row_tol) return false;
  }
  return (x.sigma().vector().array() > 0.0).all() && x.sigma().vector().allFinite();
}

}  // namespace lrcc
