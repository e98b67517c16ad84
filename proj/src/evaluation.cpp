#include "lrcc/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "lrcc/errors.hpp"
#include "lrcc/random.hpp"

namespace lrcc {

std::string_view to_string(ScoreKind kind) {
  return kind == ScoreKind::ConditionalCorrelation ? "conditional-correlation" : "raw-precision";
}

ScoreKind parse_score_kind(std::string_view name) {
  if (name == "conditional-correlation") return ScoreKind::ConditionalCorrelation;
  if (name == "raw-precision") return ScoreKind::RawPrecision;
  throw Error(ErrorCode::InvalidArgument, "unknown score kind '" + std::string(name) + "'");
}

Matrix edge_scores(const PrecisionModel& m, ScoreKind kind) {
  const Matrix& basis = kind == ScoreKind::ConditionalCorrelation ? m.w().matrix() : m.factor();
  Matrix scores = (basis * basis.transpose()).cwiseAbs();
  scores.diagonal().setZero();
  return scores;
}

RocCurve roc_curve(std::span<const double> scores, std::span<const char> labels) {
  require(scores.size() == labels.size(), ErrorCode::DimensionMismatch,
          "scores and labels differ in length");
  for (double s : scores)
    require(!std::isnan(s), ErrorCode::InvalidArgument, "scores must not be NaN");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve out;
  for (char l : labels) (l ? out.positives : out.negatives) += 1;
  require(out.positives > 0 && out.negatives > 0, ErrorCode::DegenerateTruth,
          "ROC needs at least one positive and one negative pair");

  const double pos = static_cast<double>(out.positives);
  const double neg = static_cast<double>(out.negatives);
  out.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  // Twice the area in units of (1 / P) x (1 / N), accumulated exactly in integers.
  long double doubled_area = 0;
  Index tp = 0, fp = 0;
  for (std::size_t g = 0; g < order.size();) {
    std::size_t end = g;
    Index group_tp = 0, group_fp = 0;
    while (end < order.size() && scores[order[end]] == scores[order[g]]) {
      (labels[order[end]] ? group_tp : group_fp) += 1;
      ++end;
    }
    doubled_area += static_cast<long double>(group_fp) * static_cast<long double>(2 * tp + group_tp);
    tp += group_tp;
    fp += group_fp;
    out.points.push_back({static_cast<double>(fp) / neg, static_cast<double>(tp) / pos, scores[order[g]]});
    g = end;
  }
  out.auc = static_cast<double>(doubled_area / (2.0L * static_cast<long double>(out.positives) *
                                                static_cast<long double>(out.negatives)));
  return out;
}

RocCurve roc(const Matrix& scores, const GraphTopology& truth) {
  const Index p = truth.p();
  require(scores.rows() == p && scores.cols() == p, ErrorCode::DimensionMismatch,
          "score matrix and truth graph differ in size");
  std::vector<double> flat;
  std::vector<char> labels;
  flat.reserve(static_cast<std::size_t>(p * (p - 1) / 2));
  labels.reserve(flat.capacity());
  for (Index i = 0; i < p; ++i) {
    for (Index j = i + 1; j < p; ++j) {
      flat.push_back(scores(i, j));
      labels.push_back(truth.has_edge(i, j) ? 1 : 0);
    }
  }
  return roc_curve(flat, labels);
}

GraphTopology threshold_graph(const Matrix& scores, double tau, std::vector<std::string> labels) {
  require(scores.rows() == scores.cols(), ErrorCode::DimensionMismatch, "scores must be square");
  require(tau >= 0.0 && tau <= 1.0, ErrorCode::InvalidArgument, "threshold must lie in [0, 1]");
  const Index p = scores.rows();
  Matrix a = Matrix::Zero(p, p);
  for (Index i = 0; i < p; ++i)
    for (Index j = i + 1; j < p; ++j)
      if (scores(i, j) >= tau) a(i, j) = a(j, i) = 1.0;
  return GraphTopology(std::move(a), std::move(labels));
}

std::vector<double> log_grid(double lo, double hi, int n) {
  require(lo > 0.0 && hi >= lo && n >= 1, ErrorCode::InvalidArgument, "invalid log grid");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log10(lo), b = std::log10(hi);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::pow(10.0, a + (b - a) * i / (n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

GridSearchResult lambda_grid_search(const ProblemGenerator& generator,
                                    std::span<const double> lambdas, int trials,
                                    const ObjectiveConfig& base, const SolverConfig& scfg,
                                    const GridSearchOptions& options) {
  require(!lambdas.empty(), ErrorCode::InvalidArgument, "lambda grid is empty");
  require(trials >= 1, ErrorCode::InvalidArgument, "trials must be >= 1");

  std::vector<TrialProblem> problems;
  problems.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) problems.push_back(generator(t));

  const std::size_t tasks = lambdas.size() * static_cast<std::size_t>(trials);
  GridSearchResult result;
  result.outcomes.resize(tasks);

  auto run = [&](std::size_t task) {
    const std::size_t li = task / static_cast<std::size_t>(trials);
    const int t = static_cast<int>(task % static_cast<std::size_t>(trials));
    TrialOutcome& out = result.outcomes[task];
    out.lambda = lambdas[li];
    out.trial = t;
    try {
      ObjectiveConfig cfg = base;
      cfg.lambda = lambdas[li];
      SolverConfig trial_cfg = scfg;
      trial_cfg.seed = derive_seed(scfg.seed, static_cast<std::uint64_t>(t));
      const TrialProblem& problem = problems[static_cast<std::size_t>(t)];
      SolveResult fit = solve(problem.samples, cfg, trial_cfg, options.kernel);
      out.roc = roc(edge_scores(PrecisionModel(fit.point), options.score), problem.truth);
      out.auc = out.roc.auc;
      if (options.keep_details) {
        out.trace = std::move(fit.trace);
      } else {
        out.roc.points.clear();
        out.trace.termination = fit.trace.termination;
        if (!fit.trace.records.empty()) out.trace.records.push_back(fit.trace.records.back());
      }
    } catch (const Error& e) {
      out.failed = true;
      out.error = e.what();
    }
  };

  const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(tasks)));
  if (jobs == 1) {
    for (std::size_t task = 0; task < tasks; ++task) run(task);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j)
      pool.emplace_back([&] {
        for (std::size_t task = next++; task < tasks; task = next++) run(task);
      });
    for (auto& th : pool) th.join();
  }

  bool found = false;
  double best_mean = 0.0;
  for (std::size_t li = 0; li < lambdas.size(); ++li) {
    LambdaSummary row;
    row.lambda = lambdas[li];
    double sum = 0.0;
    for (int t = 0; t < trials; ++t) {
      const TrialOutcome& o =
          result.outcomes[li * static_cast<std::size_t>(trials) + static_cast<std::size_t>(t)];
      if (o.failed) {
        ++row.failures;
      } else {
        ++row.completed;
        sum += o.auc;
      }
    }
    row.mean_auc = row.completed > 0 ? sum / row.completed : 0.0;
    row.disqualified = row.failures * 5 > trials;
    if (!row.disqualified) {
      const bool better = !found || row.mean_auc > best_mean ||
                          (row.mean_auc == best_mean && row.lambda < result.best_lambda);
      if (better) {
        found = true;
        best_mean = row.mean_auc;
        result.best_lambda = row.lambda;
      }
    }
    result.table.push_back(row);
  }
  require(found, ErrorCode::SolverFailure, "every lambda in the grid was disqualified");
  return result;
}

}  // namespace lrcc
