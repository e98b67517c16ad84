#include "lrcc/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "lrcc/errors.hpp"

namespace lrcc {

void ObjectiveConfig::validate() const {
  require(std::isfinite(lambda) && lambda >= 0.0, ErrorCode::InvalidArgument,
          "lambda must be finite and >= 0");
  require(std::isfinite(epsilon) && epsilon > 0.0, ErrorCode::InvalidArgument,
          "epsilon must be finite and > 0");
  require(k >= 1, ErrorCode::InvalidArgument, "rank bound k must be >= 1");
}

// SampleSet ---------------------------------------------------------------------------

SampleSet SampleSet::from_data(Matrix x, Form form) {
  require(x.rows() >= 1 && x.cols() >= 1, ErrorCode::InvalidArgument,
          "sample matrix must be non-empty");
  require(x.allFinite(), ErrorCode::InvalidArgument, "sample matrix has non-finite entries");
  SampleSet out;
  out.p_ = x.rows();
  out.n_ = x.cols();
  out.diag_ = x.rowwise().squaredNorm() / static_cast<double>(out.n_);
  const bool dense = form == Form::Dense || (form == Form::Automatic && 2 * out.n_ >= out.p_);
  if (dense) {
    Matrix s = Matrix::Zero(out.p_, out.p_);
    s.selfadjointView<Eigen::Lower>().rankUpdate(x, 1.0 / static_cast<double>(out.n_));
    s.triangularView<Eigen::StrictlyUpper>() = s.transpose();
    out.s_ = std::make_shared<const Matrix>(std::move(s));
  }
  out.x_ = std::make_shared<const Matrix>(std::move(x));
  return out;
}

SampleSet SampleSet::from_covariance(Matrix s, Index n) {
  require(s.rows() == s.cols() && s.rows() >= 1, ErrorCode::DimensionMismatch,
          "covariance must be square and non-empty");
  require(s.allFinite(), ErrorCode::InvalidArgument, "covariance has non-finite entries");
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  require((s - s.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale,
          ErrorCode::InvalidArgument, "covariance must be symmetric");
  SampleSet out;
  out.p_ = s.rows();
  out.n_ = n;
  out.diag_ = s.diagonal();
  out.s_ = std::make_shared<const Matrix>(std::move(s));
  return out;
}

const Matrix& SampleSet::data() const {
  require(has_data(), ErrorCode::InvalidArgument, "sample set holds a covariance only");
  return *x_;
}

Matrix SampleSet::apply(const Matrix& a) const {
  require(a.rows() == p_, ErrorCode::DimensionMismatch, "covariance apply: row count");
  if (s_) return *s_ * a;
  const Matrix xta = x_->transpose() * a;
  return (*x_ * xta) / static_cast<double>(n_);
}

Matrix SampleSet::covariance() const {
  if (s_) return *s_;
  Matrix s = (*x_) * x_->transpose();
  return s / static_cast<double>(n_);
}

// PrecisionModel ----------------------------------------------------------------------

PrecisionModel::PrecisionModel(ObliqueFactor w, ScaleVector sigma)
    : w_(std::move(w)), sigma_(std::move(sigma)) {
  require(w_.p() == sigma_.size(), ErrorCode::DimensionMismatch,
          "precision model: W rows and sigma length differ");
  factor_ = sigma_.vector().asDiagonal() * w_.matrix();
  gram_ = factor_.transpose() * factor_;
  gram_w_ = w_.matrix().transpose() * w_.matrix();
  gram_chol_.compute(gram_);
  if (gram_chol_.info() != Eigen::Success) {
    rank_deficient_ = true;
  } else {
    const Vector pivots = gram_chol_.matrixLLT().diagonal();
    const double largest = gram_.diagonal().maxCoeff();
    rank_deficient_ = !(pivots.array().square().minCoeff() >= 1e-12 * largest);
  }
}

double PrecisionModel::entry(Index q, Index l) const {
  require(q >= 0 && q < p() && l >= 0 && l < p(), ErrorCode::IndexOutOfRange,
          "precision entry index out of range");
  return factor_.row(q).dot(factor_.row(l));
}

Matrix PrecisionModel::dense(Index cap) const {
  require(p() <= cap, ErrorCode::InvalidArgument,
          "dense precision requested for p = " + std::to_string(p()) + " above cap " +
              std::to_string(cap));
  return factor_ * factor_.transpose();
}

double PrecisionModel::conditional_correlation(Index q, Index l) const {
  require(q >= 0 && q < p() && l >= 0 && l < p(), ErrorCode::IndexOutOfRange,
          "conditional correlation index out of range");
  require(q != l, ErrorCode::InvalidArgument, "conditional correlation needs q != l");
  return -w_.matrix().row(q).dot(w_.matrix().row(l));
}

void PrecisionModel::require_full_rank() const {
  require(!rank_deficient_, ErrorCode::RankDeficient,
          "Gram matrix W^T diag(sigma^2) W is singular; rank(Theta) < k");
}

double PrecisionModel::logdet_k() const {
  require_full_rank();
  return 2.0 * gram_chol_.matrixLLT().diagonal().array().log().sum();
}

Matrix PrecisionModel::gram_solve(const Matrix& b) const {
  require_full_rank();
  return gram_chol_.solve(b);
}

PrecisionModel::LowRankPinv PrecisionModel::pseudo_inverse_factored() const {
  const Matrix inv = gram_solve(Matrix::Identity(k(), k()));
  return {factor_, inv * inv};
}

Matrix PrecisionModel::pseudo_inverse(Index cap) const {
  require(p() <= cap, ErrorCode::InvalidArgument, "dense pseudo-inverse above size cap");
  const LowRankPinv f = pseudo_inverse_factored();
  return f.outer * f.core * f.outer.transpose();
}

// Penalty -----------------------------------------------------------------------------

double log_cosh_penalty(double t, double epsilon) {
  const double x = std::abs(t / epsilon);
  return epsilon * (x + std::log1p(std::exp(-2.0 * x)) - std::numbers::ln2);
}

PenaltySweep penalty_sweep(const Matrix& factor, double epsilon, bool with_gradient,
                           const KernelOptions& opts) {
  require(epsilon > 0.0, ErrorCode::InvalidArgument, "epsilon must be > 0");
  const Index p = factor.rows();
  const Index k = factor.cols();
  const Index tile = std::max<Index>(1, opts.tile);
  const Index blocks = (p + tile - 1) / tile;

  std::vector<std::pair<Index, Index>> pairs;
  for (Index bi = 0; bi < blocks; ++bi)
    for (Index bj = bi; bj < blocks; ++bj) pairs.emplace_back(bi, bj);

  const int threads = static_cast<int>(
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(1, opts.threads)), 1, pairs.size()));
  std::vector<double> pair_values(pairs.size(), 0.0);
  std::vector<Matrix> partial(static_cast<std::size_t>(threads));
  if (with_gradient)
    for (auto& m : partial) m = Matrix::Zero(p, k);

  auto worker = [&](int slot) {
    Matrix theta;
    Matrix grad;
    for (std::size_t idx = static_cast<std::size_t>(slot); idx < pairs.size();
         idx += static_cast<std::size_t>(threads)) {
      const auto [bi, bj] = pairs[idx];
      const Index i0 = bi * tile, ni = std::min(tile, p - i0);
      const Index j0 = bj * tile, nj = std::min(tile, p - j0);
      const bool diagonal_block = bi == bj;
      theta.noalias() = factor.middleRows(i0, ni) * factor.middleRows(j0, nj).transpose();
      if (with_gradient) grad.resize(ni, nj);
      double sum = 0.0;
      for (Index j = 0; j < nj; ++j) {
        for (Index i = 0; i < ni; ++i) {
          if (diagonal_block && i == j) {
            if (with_gradient) grad(i, j) = 0.0;
            continue;
          }
          const double t = theta(i, j);
          sum += log_cosh_penalty(t, epsilon);
          if (with_gradient) grad(i, j) = std::tanh(t / epsilon);
        }
      }
      pair_values[idx] = diagonal_block ? sum : 2.0 * sum;
      if (with_gradient) {
        Matrix& acc = partial[static_cast<std::size_t>(slot)];
        acc.middleRows(i0, ni).noalias() += grad * factor.middleRows(j0, nj);
        if (!diagonal_block)
          acc.middleRows(j0, nj).noalias() += grad.transpose() * factor.middleRows(i0, ni);
      }
    }
  };

  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }

  PenaltySweep out;
  for (double v : pair_values) out.value += v;
  if (with_gradient) {
    out.grad_times_factor = std::move(partial[0]);
    for (int t = 1; t < threads; ++t) out.grad_times_factor += partial[static_cast<std::size_t>(t)];
  }
  return out;
}

double penalty_value(const PrecisionModel& m, double epsilon, const KernelOptions& opts) {
  return penalty_sweep(m.factor(), epsilon, false, opts).value;
}

Matrix penalty_gradient(const PrecisionModel& m, double epsilon) {
  require(epsilon > 0.0, ErrorCode::InvalidArgument, "epsilon must be > 0");
  Matrix g = (m.dense() / epsilon).array().tanh().matrix();
  g.diagonal().setZero();
  return g;
}

// Objective and gradients -------------------------------------------------------------

double objective_value(const ObliqueFactor& w, const ScaleVector& sigma, const SampleSet& s,
                       const ObjectiveConfig& cfg, const KernelOptions& opts) {
  cfg.validate();
  require(s.p() == w.p(), ErrorCode::DimensionMismatch, "objective: sample dimension differs");
  const PrecisionModel m(w, sigma);
  if (m.rank_deficient()) return std::numeric_limits<double>::infinity();
  const Matrix& a = m.factor();
  const double fit = 0.5 * a.cwiseProduct(s.apply(a)).sum();
  double value = fit - 0.5 * m.logdet_k();
  if (cfg.lambda > 0.0) value += cfg.lambda * penalty_sweep(a, cfg.epsilon, false, opts).value;
  return value;
}

Matrix euclidean_grad_theta(const PrecisionModel& m, const SampleSet& s,
                            const ObjectiveConfig& cfg) {
  cfg.validate();
  require(s.p() == m.p(), ErrorCode::DimensionMismatch, "gradient: sample dimension differs");
  Matrix g = 0.5 * (s.covariance() - m.pseudo_inverse());
  if (cfg.lambda > 0.0) g += cfg.lambda * penalty_gradient(m, cfg.epsilon);
  return g;
}

EuclideanGradient chain_rule_grads(const ObliqueFactor& w, const ScaleVector& sigma,
                                   const Matrix& g_theta) {
  require(w.p() == sigma.size() && g_theta.rows() == w.p() && g_theta.cols() == w.p(),
          ErrorCode::DimensionMismatch, "chain_rule_grads: shapes differ");
  const Matrix a = sigma.vector().asDiagonal() * w.matrix();
  const Matrix ga = g_theta * a;
  return {2.0 * sigma.vector().asDiagonal() * ga, 2.0 * w.matrix().cwiseProduct(ga).rowwise().sum()};
}

LrccObjective::LrccObjective(SampleSet samples, ObjectiveConfig cfg, KernelOptions opts)
    : samples_(std::move(samples)), cfg_(cfg), opts_(opts) {
  cfg_.validate();
}

double LrccObjective::value(const ProductPoint& x) const {
  return objective_value(x.w(), x.sigma(), samples_, cfg_, opts_);
}

LrccObjective::Evaluation LrccObjective::evaluate(const ProductPoint& x) const {
  require(samples_.p() == x.p(), ErrorCode::DimensionMismatch,
          "objective: sample dimension differs");
  const PrecisionModel m(x);
  const Matrix& a = m.factor();
  const Matrix sa = samples_.apply(a);

  double value = 0.5 * a.cwiseProduct(sa).sum() - 0.5 * m.logdet_k();
  // B = G_theta A with G_theta = 1/2 (S - Theta^+) + lambda grad h; Theta^+ A = A G^-1.
  Matrix b = 0.5 * sa - 0.5 * m.gram_solve(a.transpose()).transpose();
  if (cfg_.lambda > 0.0) {
    PenaltySweep sweep = penalty_sweep(a, cfg_.epsilon, true, opts_);
    value += cfg_.lambda * sweep.value;
    b += cfg_.lambda * sweep.grad_times_factor;
  }
  EuclideanGradient egrad{2.0 * x.sigma().vector().asDiagonal() * b,
                          2.0 * x.w().matrix().cwiseProduct(b).rowwise().sum()};
  return {value, std::move(egrad)};
}

TangentPair LrccObjective::riemannian_gradient(const ProductPoint& x) const {
  const Evaluation e = evaluate(x);
  return rgrad_product(x, e.egrad.w, e.egrad.sigma);
}

}  // namespace lrcc
