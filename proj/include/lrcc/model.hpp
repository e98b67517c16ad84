#pragma once

#include <memory>
#include <optional>

#include "lrcc/product.hpp"

namespace lrcc {

/// Penalty weight, log-cosh smoothing and rank bound of the LRCC objective.
struct ObjectiveConfig {
  double lambda = 0.0;
  double epsilon = 1e-2;
  Index k = 1;

  void validate() const;
};

/// Execution knobs for the O(p^2) penalty sweep.
struct KernelOptions {
  int threads = 1;   // 1 = strict sequential reduction order
  Index tile = 256;  // tile edge; memory is O(pk + tile^2)
};

/// Samples X (p x n, one row per node) and their covariance S = X X^T / n.
///
/// S is held densely when that is cheaper to apply than X (2n >= p), otherwise it is
/// only available through apply() and the explicit covariance() call.
class SampleSet {
 public:
  enum class Form { Automatic, Dense, Factored };

  static SampleSet from_data(Matrix x, Form form = Form::Automatic);
  /// Covariance only; n is informational.
  static SampleSet from_covariance(Matrix s, Index n);

  Index p() const noexcept { return p_; }
  Index n() const noexcept { return n_; }
  bool dense() const noexcept { return static_cast<bool>(s_); }
  bool has_data() const noexcept { return static_cast<bool>(x_); }
  const Matrix& data() const;

  /// S A, in O(p n k) for factored storage or O(p^2 k) for dense.
  Matrix apply(const Matrix& a) const;
  /// Dense S; allocates p x p when stored factored.
  Matrix covariance() const;
  const Vector& diagonal() const noexcept { return diag_; }
  double trace() const noexcept { return diag_.sum(); }

 private:
  SampleSet() = default;

  Index p_ = 0;
  Index n_ = 0;
  std::shared_ptr<const Matrix> x_;
  std::shared_ptr<const Matrix> s_;
  Vector diag_;
};

/// Theta = diag(sigma) W W^T diag(sigma), held through A = diag(sigma) W and the
/// k x k Gram factors A^T A and W^T W. Dense Theta is only built on request.
class PrecisionModel {
 public:
  static constexpr Index kDefaultDenseCap = 2000;

  PrecisionModel(ObliqueFactor w, ScaleVector sigma);
  explicit PrecisionModel(const ProductPoint& x) : PrecisionModel(x.w(), x.sigma()) {}

  const ObliqueFactor& w() const noexcept { return w_; }
  const ScaleVector& sigma() const noexcept { return sigma_; }
  Index p() const noexcept { return w_.p(); }
  Index k() const noexcept { return w_.k(); }

  const Matrix& factor() const noexcept { return factor_; }
  /// W^T diag(sigma^2) W; its eigenvalues are the k nonzero eigenvalues of Theta.
  const Matrix& gram() const noexcept { return gram_; }
  const Matrix& gram_w() const noexcept { return gram_w_; }

  /// Cholesky of gram() failed, or a pivot fell below 1e-12 of the largest diagonal entry.
  bool rank_deficient() const noexcept { return rank_deficient_; }

  double entry(Index q, Index l) const;
  /// Throws InvalidArgument when p exceeds `cap`.
  Matrix dense(Index cap = kDefaultDenseCap) const;

  /// -Theta_ql / sqrt(Theta_qq Theta_ll). Rows of W are unit-norm so Theta_qq = sigma_q^2 > 0
  /// and the value reduces to -<W_q, W_l>.
  double conditional_correlation(Index q, Index l) const;

  /// log det_k(Theta) = log det(gram()). Throws RankDeficient.
  double logdet_k() const;

  /// Theta^+ = A G^-2 A^T as the pair (A, G^-2). Throws RankDeficient.
  struct LowRankPinv {
    Matrix outer;
    Matrix core;
  };
  LowRankPinv pseudo_inverse_factored() const;
  Matrix pseudo_inverse(Index cap = kDefaultDenseCap) const;

  /// G^-1 B for a k-row B. Throws RankDeficient.
  Matrix gram_solve(const Matrix& b) const;

 private:
  void require_full_rank() const;

  ObliqueFactor w_;
  ScaleVector sigma_;
  Matrix factor_;
  Matrix gram_;
  Matrix gram_w_;
  Eigen::LLT<Matrix> gram_chol_;
  bool rank_deficient_ = false;
};

inline PrecisionModel assemble_precision(const ObliqueFactor& w, const ScaleVector& sigma) {
  return PrecisionModel(w, sigma);
}

/// eps * log(cosh(t / eps)), evaluated without overflow.
double log_cosh_penalty(double t, double epsilon);

/// Sum over q != l of the log-cosh penalty of Theta_ql.
double penalty_value(const PrecisionModel& m, double epsilon, const KernelOptions& opts = {});
/// tanh(Theta / eps) with a zero diagonal. Dense p x p; for inspection and small p.
Matrix penalty_gradient(const PrecisionModel& m, double epsilon);

/// Output of one tiled pass over Theta: h(Theta) and, optionally, grad h(Theta) * A.
struct PenaltySweep {
  double value = 0.0;
  Matrix grad_times_factor;
};
PenaltySweep penalty_sweep(const Matrix& factor, double epsilon, bool with_gradient,
                           const KernelOptions& opts = {});

/// 1/2 tr(Theta S) - 1/2 log det_k(Theta) + lambda h(Theta); +infinity when rank-deficient.
double objective_value(const ObliqueFactor& w, const ScaleVector& sigma, const SampleSet& s,
                       const ObjectiveConfig& cfg, const KernelOptions& opts = {});

/// 1/2 (S - Theta^+) + lambda grad h(Theta), dense p x p. Throws RankDeficient.
Matrix euclidean_grad_theta(const PrecisionModel& m, const SampleSet& s, const ObjectiveConfig& cfg);

struct EuclideanGradient {
  Matrix w;
  Vector sigma;
};

/// Pulls a symmetric Theta-space gradient back through (W, sigma) -> Theta:
/// 2 diag(sigma) G diag(sigma) W and 2 diagvec(W W^T diag(sigma) G).
EuclideanGradient chain_rule_grads(const ObliqueFactor& w, const ScaleVector& sigma,
                                   const Matrix& g_theta);

/// The LRCC objective on the product manifold, evaluated without p x p intermediates
/// (apart from dense S when the sample set stores one).
class LrccObjective {
 public:
  LrccObjective(SampleSet samples, ObjectiveConfig cfg, KernelOptions opts = {});

  const SampleSet& samples() const noexcept { return samples_; }
  const ObjectiveConfig& config() const noexcept { return cfg_; }

  double value(const ProductPoint& x) const;

  struct Evaluation {
    double value;
    EuclideanGradient egrad;
  };
  /// Throws RankDeficient.
  Evaluation evaluate(const ProductPoint& x) const;

  TangentPair riemannian_gradient(const ProductPoint& x) const;

 private:
  SampleSet samples_;
  ObjectiveConfig cfg_;
  KernelOptions opts_;
};

}  // namespace lrcc
