// Independent reference computations for the unit and acceptance tests. Everything here
// is deliberately dense and naive; none of it reuses library kernels.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "lrcc/random.hpp"
#include "lrcc/types.hpp"

namespace oracle {

using lrcc::Index;
using lrcc::Matrix;
using lrcc::Vector;

inline Matrix gaussian(Index rows, Index cols, lrcc::CounterRng& rng) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

inline Vector gaussian(Index n, lrcc::CounterRng& rng) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = rng.normal();
  return v;
}

/// Haar-ish orthogonal matrix: Q of a Gaussian matrix with the sign of diag(R) fixed.
inline Matrix orthogonal(Index k, lrcc::CounterRng& rng) {
  const Matrix g = gaussian(k, k, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(k, k);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < k; ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  return q;
}

inline Matrix unit_rows(Matrix z) {
  for (Index i = 0; i < z.rows(); ++i) z.row(i) /= z.row(i).norm();
  return z;
}

inline Vector positive(Index p, lrcc::CounterRng& rng, double lo = 0.5, double hi = 2.0) {
  Vector s(p);
  for (Index i = 0; i < p; ++i) s(i) = rng.uniform(lo, hi);
  return s;
}

inline Matrix skew(Index k, lrcc::CounterRng& rng) {
  const Matrix a = gaussian(k, k, rng);
  return a - a.transpose();
}

/// Orthogonal projection of Z onto {xi : rowdot(xi, W) = 0}, as a constrained
/// least-squares problem on vec(xi).
inline Matrix tangent_projection_lsq(const Matrix& w, const Matrix& z) {
  const Index p = w.rows(), k = w.cols();
  Matrix c = Matrix::Zero(p, p * k);  // c * vec(xi) = rowdot(xi, W), column-major vec
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < k; ++j) c(i, j * p + i) = w(i, j);
  const Vector vz = Eigen::Map<const Vector>(z.data(), p * k);
  const Vector lagrange = (c * c.transpose()).ldlt().solve(c * vz);
  const Vector vx = vz - c.transpose() * lagrange;
  return Eigen::Map<const Matrix>(vx.data(), p, k);
}

/// Horizontal projection via the dense k^2 x k^2 Kronecker form of
/// M Omega + Omega M = W^T xi - xi^T W with M = W^T W.
inline Matrix horizontal_projection_kron(const Matrix& w, const Matrix& xi) {
  const Index k = w.cols();
  const Matrix m = w.transpose() * w;
  const Matrix rhs = w.transpose() * xi - xi.transpose() * w;
  const Matrix eye = Matrix::Identity(k, k);
  Matrix big(k * k, k * k);
  // vec(M X) = (I kron M) vec X; vec(X M) = (M^T kron I) vec X.
  for (Index a = 0; a < k; ++a)
    for (Index b = 0; b < k; ++b)
      big.block(a * k, b * k, k, k) = eye(a, b) * m + m(b, a) * eye;
  const Vector x = big.fullPivLu().solve(Eigen::Map<const Vector>(rhs.data(), k * k));
  const Matrix omega = Eigen::Map<const Matrix>(x.data(), k, k);
  return xi - w * omega;
}

inline Matrix precision(const Matrix& w, const Vector& sigma) {
  return sigma.asDiagonal() * w * w.transpose() * sigma.asDiagonal();
}

inline Matrix svd_pinv(const Matrix& a, double rel_tol = 1e-10) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector s = svd.singularValues();
  Vector inv = Vector::Zero(s.size());
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) inv(i) = 1.0 / s(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

/// Sum of logs of the k largest eigenvalues of a symmetric matrix.
inline double logdet_top_k(const Matrix& theta, Index k) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(theta);
  return es.eigenvalues().tail(k).array().log().sum();
}

inline double log_cosh(double t, double eps) { return eps * std::log(std::cosh(t / eps)); }

inline double dense_penalty(const Matrix& theta, double eps) {
  double h = 0.0;
  for (Index i = 0; i < theta.rows(); ++i)
    for (Index j = 0; j < theta.cols(); ++j)
      if (i != j) h += log_cosh(theta(i, j), eps);
  return h;
}

inline double dense_objective(const Matrix& theta, const Matrix& s, Index k, double lambda, double eps) {
  return 0.5 * (theta * s).trace() - 0.5 * logdet_top_k(theta, k) + lambda * dense_penalty(theta, eps);
}

/// P(score_pos > score_neg) + 0.5 P(tie), by enumerating every positive/negative pair.
inline double pairwise_auc(const std::vector<double>& scores, const std::vector<char>& labels) {
  double wins = 0.0;
  long long pairs = 0;
  for (std::size_t a = 0; a < scores.size(); ++a) {
    if (!labels[a]) continue;
    for (std::size_t b = 0; b < scores.size(); ++b) {
      if (labels[b]) continue;
      ++pairs;
      if (scores[a] > scores[b]) wins += 1.0;
      else if (scores[a] == scores[b]) wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

inline double central_difference(const std::function<double(double)>& f, double h) {
  return (f(h) - f(-h)) / (2.0 * h);
}

}  // namespace oracle
