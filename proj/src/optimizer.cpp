#include "lrcc/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

#include "lrcc/errors.hpp"
#include "lrcc/random.hpp"

namespace lrcc {

std::string_view to_string(Method method) {
  return method == Method::GradientDescent ? "gradient-descent" : "conjugate-gradient";
}

Method parse_method(std::string_view name) {
  if (name == "gradient-descent") return Method::GradientDescent;
  if (name == "conjugate-gradient") return Method::ConjugateGradient;
  throw Error(ErrorCode::InvalidArgument, "unknown method '" + std::string(name) + "'");
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::GradientTolerance: return "gradient-tolerance";
    case Termination::MaxIterations: return "max-iterations";
    case Termination::LineSearchFailed: return "line-search-failed";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  require(max_iters >= 0, ErrorCode::InvalidArgument, "max_iters must be >= 0");
  require(grad_tol >= 0.0, ErrorCode::InvalidArgument, "grad_tol must be >= 0");
  require(armijo.contraction > 0.0 && armijo.contraction < 1.0, ErrorCode::InvalidArgument,
          "contraction must lie in (0, 1)");
  require(armijo.sufficient_decrease > 0.0 && armijo.sufficient_decrease < 1.0,
          ErrorCode::InvalidArgument, "sufficient decrease constant must lie in (0, 1)");
  require(armijo.max_backtracks >= 1, ErrorCode::InvalidArgument, "max_backtracks must be >= 1");
  require(armijo.initial_step > 0.0 && std::isfinite(armijo.initial_step),
          ErrorCode::InvalidArgument, "initial step must be positive");
  require(cg_restart >= 0, ErrorCode::InvalidArgument, "cg_restart must be >= 0");
}

double SolveTrace::relative_grad_norm() const {
  if (records.empty()) return 0.0;
  const double g0 = records.front().grad_norm;
  return g0 > 0.0 ? records.back().grad_norm / g0 : 0.0;
}

void SolveTrace::write_jsonl(std::ostream& out, bool with_time) const {
  const auto old_precision = out.precision(17);
  for (const auto& r : records) {
    out << "{\"iteration\":" << r.iteration << ",\"value\":" << r.value
        << ",\"grad_norm\":" << r.grad_norm << ",\"step\":" << r.step
        << ",\"backtracks\":" << r.backtracks;
    if (with_time) out << ",\"seconds\":" << r.seconds;
    out << "}\n";
  }
  out << "{\"termination\":\"" << to_string(termination)
      << "\",\"reinitializations\":" << reinitializations << "}\n";
  out.precision(old_precision);
}

ProductPoint initialize(const SampleSet& s, Index k, std::uint64_t seed, std::uint64_t stream) {
  const Index p = s.p();
  require(k >= 1 && k <= p, ErrorCode::InvalidArgument,
          "rank bound k = " + std::to_string(k) + " must lie in [1, p = " + std::to_string(p) + "]");
  const double trace = s.trace();
  require(trace > 0.0, ErrorCode::DegenerateCovariance, "sample covariance has zero trace");

  CounterRng rng(seed, stream);
  Matrix w(p, k);
  for (Index i = 0; i < p; ++i) {
    do {
      for (Index j = 0; j < k; ++j) w(i, j) = rng.normal();
    } while (w.row(i).norm() < 1e-8);
  }
  const double delta = 1e-8 * trace / static_cast<double>(p);
  Vector sigma = (s.diagonal().array() + delta).rsqrt();
  return ProductPoint(ObliqueFactor::project(w), ScaleVector(std::move(sigma)));
}

LineSearchResult line_search(const PointObjective& f, const ProductPoint& x,
                             const TangentPair& direction, double f0, double g0,
                             const ArmijoConfig& cfg, double initial_step) {
  require(g0 < 0.0, ErrorCode::InvalidArgument,
          "line search needs a descent direction (directional derivative < 0)");
  double step = initial_step;
  for (int backtracks = 0; backtracks <= cfg.max_backtracks; ++backtracks) {
    ProductPoint candidate = retract_product(x, direction, step);
    const double value = f(candidate);
    if (std::isfinite(value) && value < f0 && value <= f0 + cfg.sufficient_decrease * step * g0)
      return {step, std::move(candidate), value, backtracks};
    step *= cfg.contraction;
  }
  throw Error(ErrorCode::LineSearchFailed,
              "no Armijo step after " + std::to_string(cfg.max_backtracks) + " backtracks");
}

double polak_ribiere_plus(const ProductPoint& x, const TangentPair& grad,
                          const TangentPair& prev_grad, double prev_sq_norm) {
  if (!(prev_sq_norm > 0.0)) return 0.0;
  const double num = metric_product(x, grad, grad) - metric_product(x, grad, prev_grad);
  return std::max(0.0, num / prev_sq_norm);
}

TangentPair cg_direction(const ProductPoint& x, const TangentPair& grad,
                         const TangentPair* prev_dir, const TangentPair* prev_grad,
                         double prev_sq_norm, const oblique::HorizontalProjector& projector) {
  const TangentPair steepest = grad.scaled(-1.0);
  if (prev_dir == nullptr || prev_grad == nullptr) return steepest;
  const double beta = polak_ribiere_plus(x, grad, *prev_grad, prev_sq_norm);
  if (beta == 0.0) return steepest;
  TangentPair d = reproject(TangentPair::combine(-1.0, grad, beta, *prev_dir), projector);
  if (metric_product(x, d, grad) >= 0.0) return steepest;
  return d;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Evaluated {
  ProductPoint point;
  double value;
  TangentPair grad;
  double grad_norm;
};

Evaluated evaluate_at(const LrccObjective& objective, ProductPoint x) {
  LrccObjective::Evaluation e = objective.evaluate(x);
  TangentPair grad = rgrad_product(x, e.egrad.w, e.egrad.sigma);
  const double norm = norm_product(x, grad);
  return {std::move(x), e.value, std::move(grad), norm};
}

}  // namespace

SolveResult solve(const LrccObjective& objective, const ProductPoint& start,
                  const SolverConfig& cfg, const IterationObserver& observer) {
  cfg.validate();
  const auto t0 = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - t0).count(); };

  SolveTrace trace;
  std::optional<Evaluated> current;
  try {
    current = evaluate_at(objective, start);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::RankDeficient) throw;
    ++trace.reinitializations;
    current = evaluate_at(objective, initialize(objective.samples(), start.k(),
                                                cfg.seed, /*stream=*/1));
  }
  trace.records.push_back({0, current->value, current->grad_norm, 0.0, 0, elapsed()});
  if (observer) observer(trace.records.back(), current->point);

  const double gnorm0 = current->grad_norm;
  const int restart = cfg.cg_restart > 0 ? cfg.cg_restart : static_cast<int>(start.p());
  const PointObjective f = [&](const ProductPoint& x) { return objective.value(x); };

  std::optional<ProductPoint> prev_point;
  std::optional<TangentPair> prev_dir;
  std::optional<TangentPair> prev_grad;
  double prev_sq_norm = 0.0;
  double prev_step = 0.0;
  trace.termination = Termination::MaxIterations;

  for (int it = 1;; ++it) {
    if (current->grad_norm <= cfg.grad_tol * gnorm0) {
      trace.termination = Termination::GradientTolerance;
      break;
    }
    if (it > cfg.max_iters) break;

    const ProductPoint& x = current->point;
    TangentPair steepest = current->grad.scaled(-1.0);
    TangentPair direction = steepest;
    const bool use_history = cfg.method == Method::ConjugateGradient && prev_point &&
                             (it - 1) % restart != 0;
    if (use_history) {
      const oblique::HorizontalProjector projector(x.w());
      const TangentPair moved_dir = transport_product(*prev_point, x, *prev_dir, projector);
      const TangentPair moved_grad = transport_product(*prev_point, x, *prev_grad, projector);
      direction = cg_direction(x, current->grad, &moved_dir, &moved_grad, prev_sq_norm, projector);
    }

    const double initial = prev_step > 0.0 ? std::clamp(2.0 * prev_step, 1e-8, 1e4)
                                           : cfg.armijo.initial_step;
    double slope = metric_product(x, current->grad, direction);
    std::optional<LineSearchResult> accepted;
    try {
      accepted = line_search(f, x, direction, current->value, slope, cfg.armijo, initial);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::LineSearchFailed && e.code() != ErrorCode::InvalidArgument) throw;
    }
    if (!accepted && use_history) {
      direction = steepest;
      slope = metric_product(x, current->grad, direction);
      try {
        accepted = line_search(f, x, direction, current->value, slope, cfg.armijo,
                               cfg.armijo.initial_step);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::LineSearchFailed && e.code() != ErrorCode::InvalidArgument)
          throw;
      }
    }
    if (!accepted) {
      trace.termination = Termination::LineSearchFailed;
      break;
    }

    Evaluated next = evaluate_at(objective, accepted->point);
    trace.records.push_back(
        {it, next.value, next.grad_norm, accepted->step, accepted->backtracks, elapsed()});
    if (observer) observer(trace.records.back(), next.point);

    prev_sq_norm = current->grad_norm * current->grad_norm;
    prev_step = accepted->step;
    prev_point = x;
    prev_dir = std::move(direction);
    prev_grad = std::move(current->grad);
    current = std::move(next);
  }

  return {current->point, std::move(trace)};
}

SolveResult solve(const SampleSet& samples, const ObjectiveConfig& cfg, const SolverConfig& scfg,
                  const KernelOptions& opts) {
  cfg.validate();
  scfg.validate();
  require(cfg.k <= samples.p(), ErrorCode::InvalidArgument, "rank bound k exceeds p");
  const LrccObjective objective(samples, cfg, opts);
  return solve(objective, initialize(samples, cfg.k, scfg.seed), scfg);
}

}  // namespace lrcc
