#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "lrcc/model.hpp"

namespace lrcc {

enum class Method { GradientDescent, ConjugateGradient };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);

struct ArmijoConfig {
  double initial_step = 1.0;
  double contraction = 0.5;
  double sufficient_decrease = 1e-4;
  int max_backtracks = 30;
};

struct SolverConfig {
  Method method = Method::ConjugateGradient;
  int max_iters = 1000;
  double grad_tol = 1e-6;  // relative to the iteration-0 gradient norm
  ArmijoConfig armijo;
  int cg_restart = 0;  // 0 = every p iterations
  std::uint64_t seed = 0;

  void validate() const;
};

enum class Termination { GradientTolerance, MaxIterations, LineSearchFailed };
std::string_view to_string(Termination t);

struct IterationRecord {
  int iteration = 0;
  double value = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
  int backtracks = 0;
  double seconds = 0.0;
};

struct SolveTrace {
  std::vector<IterationRecord> records;
  Termination termination = Termination::MaxIterations;
  int reinitializations = 0;

  int iterations() const noexcept { return records.empty() ? 0 : records.back().iteration; }
  double relative_grad_norm() const;
  /// One JSON object per line. Wall-clock time is included only when asked for.
  void write_jsonl(std::ostream& out, bool with_time = true) const;
};

struct SolveResult {
  ProductPoint point;
  SolveTrace trace;
};

/// Row-normalized Gaussian W and sigma_i = (S_ii + delta)^-1/2, delta = 1e-8 tr(S) / p.
ProductPoint initialize(const SampleSet& s, Index k, std::uint64_t seed, std::uint64_t stream = 0);

struct LineSearchResult {
  double step;
  ProductPoint point;
  double value;
  int backtracks;
};

using PointObjective = std::function<double(const ProductPoint&)>;

/// Geometric backtracking until f(R(x, a d)) <= f0 + c1 a g0. g0 is the directional
/// derivative along d and must be negative. Throws LineSearchFailed.
LineSearchResult line_search(const PointObjective& f, const ProductPoint& x,
                             const TangentPair& direction, double f0, double g0,
                             const ArmijoConfig& cfg, double initial_step);

/// max(0, <g, g - g_prev> / |g_prev|^2), the Polak-Ribiere+ coefficient. prev_grad is
/// already transported to the current point; prev_sq_norm is |g_prev|^2 at its own point.
double polak_ribiere_plus(const ProductPoint& x, const TangentPair& grad,
                          const TangentPair& prev_grad, double prev_sq_norm);

/// -grad + beta prev_dir, horizontally re-projected; -grad when that is not a descent
/// direction or no history is given.
TangentPair cg_direction(const ProductPoint& x, const TangentPair& grad,
                         const TangentPair* prev_dir, const TangentPair* prev_grad,
                         double prev_sq_norm, const oblique::HorizontalProjector& projector);

/// Called with every trace record and the iterate it describes, starting at iteration 0.
using IterationObserver = std::function<void(const IterationRecord&, const ProductPoint&)>;

SolveResult solve(const LrccObjective& objective, const ProductPoint& start,
                  const SolverConfig& cfg, const IterationObserver& observer = {});
SolveResult solve(const SampleSet& samples, const ObjectiveConfig& cfg,
                  const SolverConfig& scfg, const KernelOptions& opts = {});

}  // namespace lrcc
