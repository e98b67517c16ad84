#include "lrcc/experiment.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <Eigen/Core>
#include "json.hpp"

#include "lrcc/errors.hpp"
#include "lrcc/io.hpp"
#include "lrcc/random.hpp"

#ifndef LRCC_VERSION
#define LRCC_VERSION "0.0.0"
#endif

namespace lrcc {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

void config_check(bool ok, const std::string& msg) {
  if (!ok) throw Error(ErrorCode::ConfigError, msg);
}

json config_json(const ExperimentConfig& c) {
  json j;
  j["p"] = c.p;
  j["n"] = c.n ? json(*c.n) : json(nullptr);
  j["graph_model"] = std::string(to_string(c.graph_model));
  j["density"] = c.density;
  j["weight_low"] = c.weight_low;
  j["weight_high"] = c.weight_high;
  j["kappa"] = c.kappa;
  j["trials"] = c.trials;
  j["k"] = c.k;
  j["lambda"] = c.lambda;
  j["lambda_grid"] = c.lambda_grid;
  j["epsilon"] = c.epsilon;
  j["standardize"] = c.standardize;
  j["method"] = std::string(to_string(c.solver.method));
  j["max_iters"] = c.solver.max_iters;
  j["grad_tol"] = c.solver.grad_tol;
  j["initial_step"] = c.solver.armijo.initial_step;
  j["contraction"] = c.solver.armijo.contraction;
  j["sufficient_decrease"] = c.solver.armijo.sufficient_decrease;
  j["max_backtracks"] = c.solver.armijo.max_backtracks;
  j["cg_restart"] = c.solver.cg_restart;
  j["score"] = std::string(to_string(c.score));
  j["threshold"] = c.threshold;
  j["gamma"] = c.gamma;
  j["beta"] = c.beta;
  j["seed"] = c.seed;
  j["jobs"] = c.jobs;
  j["deterministic"] = c.deterministic;
  j["output_dir"] = c.output_dir;
  return j;
}

double get_number(const json& v, const std::string& key) {
  config_check(v.is_number(), "'" + key + "' must be a number");
  return v.get<double>();
}

long long get_integer(const json& v, const std::string& key) {
  if (v.is_number_float()) {
    const double d = v.get<double>();
    config_check(d == static_cast<double>(static_cast<long long>(d)), "'" + key + "' must be an integer");
    return static_cast<long long>(d);
  }
  config_check(v.is_number_integer(), "'" + key + "' must be an integer");
  return v.get<long long>();
}

bool get_bool(const json& v, const std::string& key) {
  config_check(v.is_boolean(), "'" + key + "' must be true or false");
  return v.get<bool>();
}

std::string get_string(const json& v, const std::string& key) {
  config_check(v.is_string(), "'" + key + "' must be a string");
  return v.get<std::string>();
}

template <typename F>
auto as_config_error(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
}

void apply_key(ExperimentConfig& c, const std::string& key, const json& v) {
  if (key == "p") c.p = get_integer(v, key);
  else if (key == "n") c.n = v.is_null() ? std::optional<Index>() : std::optional<Index>(get_integer(v, key));
  else if (key == "graph_model") c.graph_model = as_config_error([&] { return parse_graph_model(get_string(v, key)); });
  else if (key == "density") c.density = get_number(v, key);
  else if (key == "weight_low") c.weight_low = get_number(v, key);
  else if (key == "weight_high") c.weight_high = get_number(v, key);
  else if (key == "kappa") c.kappa = get_number(v, key);
  else if (key == "trials") c.trials = static_cast<int>(get_integer(v, key));
  else if (key == "k") c.k = get_integer(v, key);
  else if (key == "lambda") c.lambda = get_number(v, key);
  else if (key == "lambda_grid") {
    config_check(v.is_array(), "'lambda_grid' must be an array of numbers");
    c.lambda_grid.clear();
    for (const auto& x : v) c.lambda_grid.push_back(get_number(x, key));
  }
  else if (key == "epsilon") c.epsilon = get_number(v, key);
  else if (key == "standardize") c.standardize = get_bool(v, key);
  else if (key == "method") c.solver.method = as_config_error([&] { return parse_method(get_string(v, key)); });
  else if (key == "max_iters") c.solver.max_iters = static_cast<int>(get_integer(v, key));
  else if (key == "grad_tol") c.solver.grad_tol = get_number(v, key);
  else if (key == "initial_step") c.solver.armijo.initial_step = get_number(v, key);
  else if (key == "contraction") c.solver.armijo.contraction = get_number(v, key);
  else if (key == "sufficient_decrease") c.solver.armijo.sufficient_decrease = get_number(v, key);
  else if (key == "max_backtracks") c.solver.armijo.max_backtracks = static_cast<int>(get_integer(v, key));
  else if (key == "cg_restart") c.solver.cg_restart = static_cast<int>(get_integer(v, key));
  else if (key == "score") c.score = as_config_error([&] { return parse_score_kind(get_string(v, key)); });
  else if (key == "threshold") c.threshold = get_number(v, key);
  else if (key == "gamma") c.gamma = get_number(v, key);
  else if (key == "beta") c.beta = get_number(v, key);
  else if (key == "seed") {
    config_check(v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0),
                 "'seed' must be a non-negative integer");
    c.seed = v.get<std::uint64_t>();
  }
  else if (key == "jobs") c.jobs = static_cast<int>(get_integer(v, key));
  else if (key == "deterministic") c.deterministic = get_bool(v, key);
  else if (key == "output_dir") c.output_dir = get_string(v, key);
  else throw Error(ErrorCode::ConfigError, "unknown configuration key '" + key + "'");
}

json manifest_json(const ExperimentConfig& cfg, const RunInfo& info, const std::string& command) {
  json m;
  m["command"] = command;
  m["command_line"] = info.command_line;
  m["version"] = version();
  m["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
               std::to_string(EIGEN_MINOR_VERSION);
  m["config"] = config_json(cfg);
  m["seeds"] = {{"base", cfg.seed}, {"solver", solver_base_seed(cfg)}};
  return m;
}

void write_json(const fs::path& path, const json& j) { io::write_text(path, j.dump(2) + "\n"); }

std::string solver_label(const ExperimentConfig& cfg) { return std::string(to_string(cfg.solver.method)); }

}  // namespace

void ExperimentConfig::validate() const {
  config_check(p >= 2, "p must be >= 2");
  config_check(!n || *n >= 1, "n must be >= 1");
  config_check(k >= 1, "k must be >= 1");
  config_check(k <= p, "k = " + std::to_string(k) + " exceeds p = " + std::to_string(p));
  config_check(density > 0.0, "density must be > 0");
  config_check(graph_model != GraphModel::ErdosRenyi || density <= 1.0,
               "Erdos-Renyi density must lie in (0, 1]");
  config_check(weight_low > 0.0 && weight_low < weight_high, "need 0 < weight_low < weight_high");
  config_check(kappa > 0.0, "kappa must be > 0");
  config_check(trials >= 1, "trials must be >= 1");
  config_check(lambda >= 0.0 && std::isfinite(lambda), "lambda must be finite and >= 0");
  config_check(!lambda_grid.empty(), "lambda_grid must not be empty");
  for (double l : lambda_grid) config_check(l >= 0.0 && std::isfinite(l), "lambda_grid entries must be >= 0");
  config_check(epsilon > 0.0 && std::isfinite(epsilon), "epsilon must be > 0");
  as_config_error([&] { solver.validate(); return 0; });
  config_check(threshold >= 0.0 && threshold <= 1.0, "threshold must lie in [0, 1]");
  config_check(gamma > 0.0, "gamma must be > 0");
  config_check(beta > 0.0 && beta < 1.0, "beta must lie in (0, 1)");
  config_check(jobs >= 1, "jobs must be >= 1");
}

std::string to_json(const ExperimentConfig& cfg) { return config_json(cfg).dump(2) + "\n"; }

ExperimentConfig parse_config(const std::string& json_text, ExperimentConfig base) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, std::string("malformed configuration: ") + e.what());
  }
  config_check(doc.is_object(), "configuration must be a JSON object");
  for (auto it = doc.begin(); it != doc.end(); ++it) apply_key(base, it.key(), it.value());
  base.validate();
  return base;
}

ExperimentConfig load_config(const fs::path& path, ExperimentConfig base) {
  std::ifstream in(path, std::ios::binary);
  config_check(static_cast<bool>(in), "cannot read configuration " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::move(base));
}

std::string version() { return LRCC_VERSION; }

std::uint64_t trial_problem_seed(const ExperimentConfig& cfg, int trial) {
  return derive_seed(derive_seed(cfg.seed, 1), static_cast<std::uint64_t>(trial));
}

std::uint64_t solver_base_seed(const ExperimentConfig& cfg) { return derive_seed(cfg.seed, 2); }

TrialProblem make_synthetic_problem(const ExperimentConfig& cfg, int trial) {
  const std::uint64_t seed = trial_problem_seed(cfg, trial);
  GraphTopology graph = random_graph(cfg.p, cfg.graph_model, cfg.density, cfg.weight_low,
                                     cfg.weight_high, seed);
  const Matrix theta = precision_from_laplacian(laplacian(graph), cfg.kappa);
  Matrix x = sample_gaussian_data(theta, cfg.sample_count(), seed);
  if (cfg.standardize) io::standardize_rows(x, io::default_labels(cfg.p));
  return TrialProblem{SampleSet::from_data(std::move(x)), std::move(graph)};
}

SynthReport run_synth(const ExperimentConfig& cfg, const fs::path& out, const RunInfo& info) {
  cfg.validate();
  SolverConfig scfg = cfg.solver;
  scfg.seed = solver_base_seed(cfg);
  GridSearchOptions opts;
  opts.jobs = cfg.deterministic ? 1 : cfg.jobs;
  opts.score = cfg.score;
  opts.keep_details = true;

  SynthReport report;
  report.grid = lambda_grid_search([&](int t) { return make_synthetic_problem(cfg, t); },
                                   cfg.lambda_grid, cfg.trials, cfg.objective(), scfg, opts);
  const GridSearchResult& grid = report.grid;

  fs::create_directories(out);
  std::ostringstream trials_csv;
  trials_csv << "lambda,trial,auc,iterations,termination,status\n";
  json failures = json::array();
  for (const TrialOutcome& o : grid.outcomes) {
    trials_csv << io::format_double(o.lambda) << ',' << o.trial << ',';
    if (o.failed) {
      trials_csv << ",,,failed\n";
      failures.push_back({{"lambda", o.lambda}, {"trial", o.trial}, {"error", o.error}});
    } else {
      trials_csv << io::format_double(o.auc) << ',' << o.trace.iterations() << ','
                 << to_string(o.trace.termination) << ",ok\n";
    }
  }
  io::write_text(out / "auc_trials.csv", trials_csv.str());

  std::ostringstream table_csv;
  table_csv << "lambda,mean_auc,completed,failures,disqualified\n";
  json table = json::array();
  for (const LambdaSummary& row : grid.table) {
    table_csv << io::format_double(row.lambda) << ',' << io::format_double(row.mean_auc) << ','
              << row.completed << ',' << row.failures << ',' << (row.disqualified ? 1 : 0) << '\n';
    table.push_back({{"lambda", row.lambda}, {"mean_auc", row.mean_auc}, {"completed", row.completed},
                     {"failures", row.failures}, {"disqualified", row.disqualified}});
    if (row.lambda == grid.best_lambda && !row.disqualified) report.best_mean_auc = row.mean_auc;
  }
  io::write_text(out / "auc_by_lambda.csv", table_csv.str());

  for (std::size_t li = 0; li < cfg.lambda_grid.size(); ++li) {
    for (int t = 0; t < cfg.trials; ++t) {
      const TrialOutcome& o = grid.outcomes[li * static_cast<std::size_t>(cfg.trials) + static_cast<std::size_t>(t)];
      if (o.failed) continue;
      const std::string stem = "lambda_" + std::to_string(li) + "_trial_" + std::to_string(t);
      std::ostringstream trace;
      o.trace.write_jsonl(trace, !cfg.deterministic);
      io::write_text(out / "traces" / (stem + ".jsonl"), trace.str());
      if (o.lambda == grid.best_lambda) io::write_roc(out / "roc" / ("trial_" + std::to_string(t) + ".csv"), o.roc);
    }
  }

  json manifest = manifest_json(cfg, info, "synth");
  json trial_seeds = json::array();
  for (int t = 0; t < cfg.trials; ++t)
    trial_seeds.push_back({{"trial", t},
                           {"problem", trial_problem_seed(cfg, t)},
                           {"solver", derive_seed(scfg.seed, static_cast<std::uint64_t>(t))}});
  manifest["seeds"]["trials"] = trial_seeds;
  write_json(out / "manifest.json", manifest);

  json summary;
  summary["best_lambda"] = grid.best_lambda;
  summary["best_mean_auc"] = report.best_mean_auc;
  summary["trials"] = cfg.trials;
  summary["p"] = cfg.p;
  summary["n"] = cfg.sample_count();
  summary["k"] = cfg.k;
  summary["solver"] = solver_label(cfg);
  summary["score"] = std::string(to_string(cfg.score));
  summary["table"] = table;
  summary["failures"] = failures;
  write_json(out / "summary.json", summary);
  return report;
}

FitReport run_fit(const ExperimentConfig& cfg, const fs::path& data, const fs::path& out,
                  const RunInfo& info) {
  ExperimentConfig checked = cfg;
  io::LabeledMatrix table = io::read_samples(data);
  const Index p = table.values.rows();
  config_check(p >= 2, "data must have at least two columns");
  checked.p = p;
  checked.validate();
  if (cfg.standardize) io::standardize_rows(table.values, table.labels);
  const Index n = table.values.cols();

  SolverConfig scfg = cfg.solver;
  scfg.seed = solver_base_seed(cfg);
  const SampleSet samples = SampleSet::from_data(std::move(table.values));
  SolveResult fit = solve(samples, cfg.objective(), scfg, {});
  const PrecisionModel model(fit.point);
  const Matrix scores = edge_scores(model, cfg.score);
  GraphTopology graph = threshold_graph(scores, cfg.threshold, table.labels);

  fs::create_directories(out);
  std::vector<std::string> w_labels;
  for (Index j = 0; j < cfg.k; ++j) w_labels.push_back("w" + std::to_string(j));
  io::write_csv(out / "W.csv", fit.point.w().matrix(), w_labels);
  io::write_csv(out / "sigma.csv", fit.point.sigma().vector(), {"sigma"});
  io::write_csv(out / "scores.csv", scores, table.labels);
  io::write_edges(out / "edges.csv", graph.edges(), table.labels);
  std::ostringstream trace;
  fit.trace.write_jsonl(trace, !cfg.deterministic);
  io::write_text(out / "trace.jsonl", trace.str());

  json manifest = manifest_json(checked, info, "fit");
  manifest["data"] = data.string();
  write_json(out / "manifest.json", manifest);

  json summary;
  summary["p"] = p;
  summary["n"] = n;
  summary["k"] = cfg.k;
  summary["lambda"] = cfg.lambda;
  summary["objective"] = fit.trace.records.back().value;
  summary["iterations"] = fit.trace.iterations();
  summary["termination"] = std::string(to_string(fit.trace.termination));
  summary["relative_grad_norm"] = fit.trace.relative_grad_norm();
  summary["threshold"] = cfg.threshold;
  summary["edges"] = graph.edge_count();
  write_json(out / "summary.json", summary);
  return FitReport{std::move(fit), std::move(graph)};
}

RocCurve run_eval(const ExperimentConfig& cfg, const fs::path& scores_path, const TruthSource& truth,
                  const fs::path& out, const RunInfo& info) {
  config_check(truth.edges.has_value() != truth.coordinates.has_value(),
               "eval needs exactly one ground truth: --truth EDGES.csv (i,j[,weight], 0-based) or "
               "--coordinates COORDS.csv (header, two columns) with --gamma/--beta");
  io::LabeledMatrix scores = io::read_csv(scores_path);
  const Index p = scores.values.cols();
  require(scores.values.rows() == p, ErrorCode::DimensionMismatch,
          scores_path.string() + ": score matrix must be square, got " + std::to_string(scores.values.rows()) +
              " x " + std::to_string(p));

  fs::create_directories(out);
  GraphTopology graph(Matrix::Zero(p, p));
  if (truth.edges) {
    graph = io::read_edges(*truth.edges, p);
  } else {
    const SensorLayout layout = io::read_layout(*truth.coordinates);
    require(layout.coords.rows() == p, ErrorCode::DimensionMismatch,
            "coordinates list " + std::to_string(layout.coords.rows()) + " sensors, scores have " +
                std::to_string(p));
    graph = kernel_ground_truth(layout, cfg.gamma, cfg.beta);
    io::write_edges(out / "truth_edges.csv", graph.edges(), scores.labels);
  }
  RocCurve curve = roc(scores.values, graph);
  io::write_roc(out / "roc.csv", curve);

  json manifest = manifest_json(cfg, info, "eval");
  manifest["scores"] = scores_path.string();
  manifest["truth"] = truth.edges ? truth.edges->string() : truth.coordinates->string();
  write_json(out / "manifest.json", manifest);

  json summary;
  summary["auc"] = curve.auc;
  summary["positives"] = curve.positives;
  summary["negatives"] = curve.negatives;
  summary["p"] = p;
  write_json(out / "summary.json", summary);
  return curve;
}

}  // namespace lrcc
