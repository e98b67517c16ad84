#include "lrcc/scale.hpp"

#include <cmath>
#include <string>

#include "lrcc/errors.hpp"

namespace lrcc {

namespace {

void require_length(Index expected, Index got, const char* where) {
  require(expected == got, ErrorCode::DimensionMismatch,
          std::string(where) + ": expected length " + std::to_string(expected) + ", got " +
              std::to_string(got));
}

}  // namespace

ScaleVector::ScaleVector(Vector entries) : entries_(std::move(entries)) {
  for (Index i = 0; i < entries_.size(); ++i) {
    require(std::isfinite(entries_(i)) && entries_(i) > 0.0, ErrorCode::InvalidArgument,
            "scale entry " + std::to_string(i) + " must be positive and finite");
  }
}

ScaleVector ScaleVector::from_external(Vector entries) {
  for (Index i = 0; i < entries.size(); ++i) {
    if (entries(i) > 0.0 && entries(i) < kFloor) entries(i) = kFloor;
  }
  return ScaleVector(std::move(entries));
}

double metric_pos(const ScaleVector& sigma, const Vector& xi, const Vector& eta) {
  require_length(sigma.size(), xi.size(), "metric_pos");
  require_length(sigma.size(), eta.size(), "metric_pos");
  return (xi.array() * eta.array() / sigma.vector().array().square()).sum();
}

Vector egrad_to_rgrad_pos(const ScaleVector& sigma, const Vector& g) {
  require_length(sigma.size(), g.size(), "egrad_to_rgrad_pos");
  return sigma.vector().array().square() * g.array();
}

ScaleVector retract_pos(const ScaleVector& sigma, const Vector& xi, double t) {
  require_length(sigma.size(), xi.size(), "retract_pos");
  require(std::isfinite(t), ErrorCode::InvalidArgument, "retract_pos: step must be finite");
  // sigma (1 + u + u^2 / 2) with u = t xi / sigma; the quadratic has no real root.
  const auto u = (t * xi.array()) / sigma.vector().array();
  Vector out = sigma.vector().array() * (1.0 + u + 0.5 * u.square());
  for (Index i = 0; i < out.size(); ++i) {
    require(std::isfinite(out(i)), ErrorCode::InvalidArgument, "retract_pos: overflow");
    if (out(i) < ScaleVector::kFloor) out(i) = ScaleVector::kFloor;
  }
  return ScaleVector(std::move(out), ScaleVector::Trusted{});
}

Vector transport_pos(const ScaleVector& sigma, const ScaleVector& sigma_bar, const Vector& xi) {
  require_length(sigma.size(), sigma_bar.size(), "transport_pos");
  require_length(sigma.size(), xi.size(), "transport_pos");
  return sigma_bar.vector().array() / sigma.vector().array() * xi.array();
}

}  // namespace lrcc
