#pragma once

#include "lrcc/types.hpp"

namespace lrcc {

/// A strictly positive, finite vector (point of R_{++}^p).
class ScaleVector {
 public:
  static constexpr double kFloor = 1e-150;

  explicit ScaleVector(Vector entries);

  /// For values read from files or user input: entries in (0, kFloor) are raised to kFloor.
  static ScaleVector from_external(Vector entries);

  const Vector& vector() const noexcept { return entries_; }
  Index size() const noexcept { return entries_.size(); }
  double operator()(Index i) const { return entries_(i); }

 private:
  struct Trusted {};
  ScaleVector(Vector entries, Trusted) noexcept : entries_(std::move(entries)) {}
  friend ScaleVector retract_pos(const ScaleVector&, const Vector&, double);

  Vector entries_;
};

/// xi^T (sigma^-2 . eta), the affine-invariant metric.
double metric_pos(const ScaleVector& sigma, const Vector& xi, const Vector& eta);

/// sigma^2 . g
Vector egrad_to_rgrad_pos(const ScaleVector& sigma, const Vector& g);

/// sigma + t xi + (t xi)^2 / (2 sigma), entrywise. Positive for every finite t.
ScaleVector retract_pos(const ScaleVector& sigma, const Vector& xi, double t);

/// sigma_bar . sigma^-1 . xi
Vector transport_pos(const ScaleVector& sigma, const ScaleVector& sigma_bar, const Vector& xi);

}  // namespace lrcc
