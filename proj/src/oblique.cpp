#include "lrcc/oblique.hpp"

#include <cmath>
#include <string>

#include "lrcc/errors.hpp"

namespace lrcc {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* where) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::DimensionMismatch,
          std::string(where) + ": expected " + std::to_string(a.rows()) + "x" +
              std::to_string(a.cols()) + ", got " + std::to_string(b.rows()) + "x" +
              std::to_string(b.cols()));
}

}  // namespace

ObliqueFactor::ObliqueFactor(Matrix entries) : entries_(std::move(entries)) {
  require(entries_.cols() >= 1 && entries_.cols() <= entries_.rows(),
          ErrorCode::InvalidArgument, "oblique factor needs 1 <= k <= p");
  for (Index i = 0; i < entries_.rows(); ++i) {
    const double norm = entries_.row(i).norm();
    require(std::abs(norm - 1.0) <= kMembershipTol, ErrorCode::InvalidArgument,
            "row " + std::to_string(i) + " of oblique factor has norm " + std::to_string(norm));
  }
}

ObliqueFactor ObliqueFactor::project(const Matrix& z) {
  require(z.cols() >= 1 && z.cols() <= z.rows(), ErrorCode::InvalidArgument,
          "oblique factor needs 1 <= k <= p");
  Matrix out = z;
  for (Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    require(norm >= 1e-300 && std::isfinite(norm), ErrorCode::ZeroRow,
            "row " + std::to_string(i) + " cannot be normalized");
    out.row(i) /= norm;
  }
  return ObliqueFactor(std::move(out), Trusted{});
}

namespace oblique {

Matrix tangent_project(const ObliqueFactor& w, const Matrix& z) {
  require_same_shape(w.matrix(), z, "tangent_project");
  const Vector inner = z.cwiseProduct(w.matrix()).rowwise().sum();
  return z - inner.asDiagonal() * w.matrix();
}

HorizontalProjector::HorizontalProjector(const ObliqueFactor& w) : w_(w) {
  const Matrix gram = w.matrix().transpose() * w.matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  eigenvectors_ = eig.eigenvectors();
  eigenvalues_ = eig.eigenvalues();
}

Matrix HorizontalProjector::vertical_generator(const Matrix& xi) const {
  const Matrix& w = w_.matrix();
  require_same_shape(w, xi, "horizontal_project");
  const Matrix wt_xi = w.transpose() * xi;
  const Matrix rhs = eigenvectors_.transpose() * (wt_xi - wt_xi.transpose()) * eigenvectors_;

  const Index k = w.cols();
  const double floor = 1e-12 * std::max(eigenvalues_.maxCoeff(), 0.0);
  Matrix omega(k, k);
  for (Index j = 0; j < k; ++j) {
    for (Index i = 0; i < k; ++i) {
      const double denom = eigenvalues_(i) + eigenvalues_(j);
      if (denom < floor || denom <= 0.0) {
        require(std::abs(rhs(i, j)) <= 1e-8, ErrorCode::SylvesterSingular,
                "W^T W is singular along an excited direction (rank-deficient W)");
        omega(i, j) = 0.0;
      } else {
        omega(i, j) = rhs(i, j) / denom;
      }
    }
  }
  omega = eigenvectors_ * omega * eigenvectors_.transpose();
  return 0.5 * (omega - omega.transpose());
}

Matrix HorizontalProjector::project(const Matrix& xi) const {
  return xi - w_.matrix() * vertical_generator(xi);
}

Matrix horizontal_project(const ObliqueFactor& w, const Matrix& xi) {
  return HorizontalProjector(w).project(xi);
}

ObliqueFactor retract(const ObliqueFactor& w, const Matrix& xi, double t) {
  require_same_shape(w.matrix(), xi, "retract");
  require(std::isfinite(t), ErrorCode::InvalidArgument, "retract: step must be finite");
  if (t == 0.0) return w;
  return ObliqueFactor::project(w.matrix() + t * xi);
}

Matrix transport(const ObliqueFactor& from, const ObliqueFactor& to, const Matrix& xi) {
  require_same_shape(from.matrix(), to.matrix(), "transport");
  return horizontal_project(to, tangent_project(to, xi));
}

double metric(const ObliqueFactor& w, const Matrix& xi, const Matrix& eta) {
  require_same_shape(w.matrix(), xi, "metric");
  require_same_shape(w.matrix(), eta, "metric");
  return xi.cwiseProduct(eta).sum();
}

bool is_tangent(const ObliqueFactor& w, const Matrix& xi, double tol) {
  if (xi.rows() != w.p() || xi.cols() != w.k()) return false;
  for (Index i = 0; i < xi.rows(); ++i) {
    const double scale = std::max(1.0, xi.row(i).norm());
    if (std::abs(xi.row(i).dot(w.matrix().row(i))) > tol * scale) return false;
  }
  return true;
}

bool is_horizontal(const ObliqueFactor& w, const Matrix& xi, double tol) {
  if (!is_tangent(w, xi, tol)) return false;
  const Matrix wt_xi = w.matrix().transpose() * xi;
  const double scale = std::max(1.0, wt_xi.norm());
  return (wt_xi - wt_xi.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

}  // namespace oblique
}  // namespace lrcc
