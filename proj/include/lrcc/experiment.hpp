#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lrcc/evaluation.hpp"

namespace lrcc {

/// Every knob of the synth, fit and eval pipelines. Serialized as a flat JSON object.
struct ExperimentConfig {
  // synthetic problems
  Index p = 150;
  std::optional<Index> n;  // unset: p + 5
  GraphModel graph_model = GraphModel::BarabasiAlbert;
  double density = 0.01;
  double weight_low = 2.0;
  double weight_high = 5.0;
  double kappa = 0.1;
  int trials = 20;

  // objective
  Index k = 15;
  double lambda = 1.0;
  std::vector<double> lambda_grid = log_grid(1e-3, 1e2, 10);
  double epsilon = 1e-2;
  bool standardize = false;

  SolverConfig solver;

  // scoring
  ScoreKind score = ScoreKind::ConditionalCorrelation;
  double threshold = 0.5;
  double gamma = 5.0;
  double beta = 0.5;

  // execution
  std::uint64_t seed = 0;
  int jobs = 1;
  bool deterministic = false;
  std::string output_dir;

  Index sample_count() const { return n ? *n : p + 5; }
  ObjectiveConfig objective() const { return {lambda, epsilon, k}; }
  /// Raises ConfigError.
  void validate() const;
};

/// Pretty-printed JSON with every key.
std::string to_json(const ExperimentConfig& cfg);
/// Unknown keys, wrong types and invalid values raise ConfigError. Missing keys keep
/// the values already in `base`.
ExperimentConfig parse_config(const std::string& json_text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

/// Recorded in every manifest.
struct RunInfo {
  std::string command_line;
};

std::string version();

/// Seeds used by synthetic trial t.
std::uint64_t trial_problem_seed(const ExperimentConfig& cfg, int trial);
std::uint64_t solver_base_seed(const ExperimentConfig& cfg);

/// Builds the graph and samples for one synthetic trial.
TrialProblem make_synthetic_problem(const ExperimentConfig& cfg, int trial);

struct SynthReport {
  GridSearchResult grid;
  double best_mean_auc = 0.0;
};

/// Monte-Carlo lambda search. Writes auc_trials.csv, auc_by_lambda.csv, roc/, traces/,
/// manifest.json and summary.json into `out`.
SynthReport run_synth(const ExperimentConfig& cfg, const std::filesystem::path& out,
                      const RunInfo& info);

struct FitReport {
  SolveResult fit;
  GraphTopology graph;
};

/// Fits one model to a samples CSV (rows = samples, columns = nodes) at cfg.lambda.
/// Writes W.csv, sigma.csv, scores.csv, edges.csv, trace.jsonl, manifest.json, summary.json.
FitReport run_fit(const ExperimentConfig& cfg, const std::filesystem::path& data,
                  const std::filesystem::path& out, const RunInfo& info);

/// Ground truth for run_eval: an edge list or sensor coordinates.
struct TruthSource {
  std::optional<std::filesystem::path> edges;
  std::optional<std::filesystem::path> coordinates;
};

/// Scores a p x p score CSV against the truth. Writes roc.csv, summary.json and, for
/// coordinates, truth_edges.csv.
RocCurve run_eval(const ExperimentConfig& cfg, const std::filesystem::path& scores,
                  const TruthSource& truth, const std::filesystem::path& out, const RunInfo& info);

}  // namespace lrcc
