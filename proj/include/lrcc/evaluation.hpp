#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lrcc/optimizer.hpp"
#include "lrcc/synthetic.hpp"

namespace lrcc {

enum class ScoreKind {
  ConditionalCorrelation,  // |<W_q, W_l>|, in [0, 1]
  RawPrecision,            // |Theta_ql|
};
std::string_view to_string(ScoreKind kind);
ScoreKind parse_score_kind(std::string_view name);

/// Symmetric nonnegative p x p scores with a zero diagonal.
Matrix edge_scores(const PrecisionModel& m, ScoreKind kind = ScoreKind::ConditionalCorrelation);

struct RocPoint {
  double fpr;
  double tpr;
  double threshold;  // score >= threshold counts as an edge; +inf for the origin
};

struct RocCurve {
  std::vector<RocPoint> points;  // from (0, 0) to (1, 1), one point per distinct score
  double auc = 0.0;
  Index positives = 0;
  Index negatives = 0;
};

/// ROC over scored items; equal scores enter together. Throws DegenerateTruth when
/// either class is empty.
RocCurve roc_curve(std::span<const double> scores, std::span<const char> labels);
/// ROC over the p(p-1)/2 unordered node pairs.
RocCurve roc(const Matrix& scores, const GraphTopology& truth);

/// Edge iff score >= tau.
GraphTopology threshold_graph(const Matrix& scores, double tau,
                              std::vector<std::string> labels = {});

/// One synthetic problem: samples plus the graph they were drawn from.
struct TrialProblem {
  SampleSet samples;
  GraphTopology truth;
};
using ProblemGenerator = std::function<TrialProblem(int trial)>;

struct TrialOutcome {
  double lambda = 0.0;
  int trial = 0;
  bool failed = false;
  std::string error;
  double auc = 0.0;
  RocCurve roc;
  SolveTrace trace;
};

struct LambdaSummary {
  double lambda = 0.0;
  double mean_auc = 0.0;
  int completed = 0;
  int failures = 0;
  bool disqualified = false;  // more than 20% of trials failed
};

struct GridSearchResult {
  double best_lambda = 0.0;
  std::vector<LambdaSummary> table;
  std::vector<TrialOutcome> outcomes;  // lambda-major, then trial
};

struct GridSearchOptions {
  int jobs = 1;
  KernelOptions kernel;
  ScoreKind score = ScoreKind::ConditionalCorrelation;
  bool keep_details = true;  // ROC points and traces in outcomes
};

/// Fits every (lambda, trial) pair; trial t uses the same problem for every lambda and
/// solver seed derive_seed(scfg.seed, t). Best lambda maximizes mean AUC, ties going to
/// the smaller lambda. Throws SolverFailure when every lambda is disqualified.
GridSearchResult lambda_grid_search(const ProblemGenerator& generator,
                                    std::span<const double> lambdas, int trials,
                                    const ObjectiveConfig& base, const SolverConfig& scfg,
                                    const GridSearchOptions& options = {});

/// n points log-spaced on [lo, hi].
std::vector<double> log_grid(double lo, double hi, int n);

}  // namespace lrcc
