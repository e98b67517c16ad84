// lrcc command-line runner: synth, fit, eval, defaults.
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lrcc/errors.hpp"
#include "lrcc/experiment.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitSolver = 4;

int exit_code(lrcc::ErrorCode code) {
  using lrcc::ErrorCode;
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidArgument:
      return kExitConfig;
    case ErrorCode::DataError:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::DegenerateTruth:
    case ErrorCode::DegenerateCovariance:
    case ErrorCode::IndexOutOfRange:
      return kExitData;
    default:
      return kExitSolver;
  }
}

void report_error(const std::string& code, const std::string& message, int status) {
  json record{{"error", code}, {"message", message}, {"exit_code", status}};
  std::cerr << record.dump() << '\n';
}

// Flag values that override the config file; unset flags leave it alone.
struct Overrides {
  std::optional<long long> p, n, k, trials, max_iters, max_backtracks, cg_restart, jobs;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda, epsilon, density, weight_low, weight_high, kappa, grad_tol,
      initial_step, contraction, sufficient_decrease, threshold, gamma, beta;
  std::optional<std::string> graph_model, method, score, output_dir;
  std::vector<double> lambda_grid;
  bool standardize = false, no_standardize = false, deterministic = false;

  json to_json() const {
    json j = json::object();
    auto put = [&](const char* key, const auto& v) {
      if (v) j[key] = *v;
    };
    put("p", p);
    put("n", n);
    put("k", k);
    put("trials", trials);
    put("max_iters", max_iters);
    put("max_backtracks", max_backtracks);
    put("cg_restart", cg_restart);
    put("jobs", jobs);
    put("seed", seed);
    put("lambda", lambda);
    put("epsilon", epsilon);
    put("density", density);
    put("weight_low", weight_low);
    put("weight_high", weight_high);
    put("kappa", kappa);
    put("grad_tol", grad_tol);
    put("initial_step", initial_step);
    put("contraction", contraction);
    put("sufficient_decrease", sufficient_decrease);
    put("threshold", threshold);
    put("gamma", gamma);
    put("beta", beta);
    put("graph_model", graph_model);
    put("method", method);
    put("score", score);
    put("output_dir", output_dir);
    if (!lambda_grid.empty()) j["lambda_grid"] = lambda_grid;
    if (standardize) j["standardize"] = true;
    if (no_standardize) j["standardize"] = false;
    if (deterministic) j["deterministic"] = true;
    return j;
  }
};

void add_model_flags(CLI::App* app, Overrides& o) {
  app->add_option("--k", o.k, "rank bound");
  app->add_option("--lambda", o.lambda, "penalty weight (fit)");
  app->add_option("--epsilon", o.epsilon, "log-cosh smoothing");
  app->add_option("--method", o.method, "gradient-descent | conjugate-gradient");
  app->add_option("--max-iters", o.max_iters);
  app->add_option("--grad-tol", o.grad_tol, "relative gradient-norm tolerance");
  app->add_option("--initial-step", o.initial_step);
  app->add_option("--contraction", o.contraction);
  app->add_option("--sufficient-decrease", o.sufficient_decrease);
  app->add_option("--max-backtracks", o.max_backtracks);
  app->add_option("--cg-restart", o.cg_restart, "0 = every p iterations");
  app->add_option("--score", o.score, "conditional-correlation | raw-precision");
  app->add_option("--seed", o.seed);
  auto* on = app->add_flag("--standardize", o.standardize, "standardize each node before fitting");
  auto* off = app->add_flag("--no-standardize", o.no_standardize);
  on->excludes(off);
}

void add_run_flags(CLI::App* app, Overrides& o, std::optional<std::string>& config) {
  app->add_option("-c,--config", config, "JSON configuration file")->check(CLI::ExistingFile);
  app->add_option("-o,--output-dir", o.output_dir, "output directory");
  app->add_option("--jobs", o.jobs, "parallel trials");
  app->add_flag("--deterministic", o.deterministic, "sequential execution and time-free traces");
}

lrcc::ExperimentConfig resolve_config(const std::optional<std::string>& path, const Overrides& o) {
  lrcc::ExperimentConfig cfg;
  if (path) cfg = lrcc::load_config(*path);
  return lrcc::parse_config(o.to_json().dump(), cfg);
}

fs::path output_dir(const lrcc::ExperimentConfig& cfg, const std::string& command) {
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  const char* root = std::getenv("LRCC_OUTPUT_ROOT");
  return fs::path(root && *root ? root : "lrcc-output") / command;
}

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) s += (i ? " " : "") + std::string(argv[i]);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank conditional-correlation graph learning"};
  app.set_version_flag("--version", lrcc::version());
  app.require_subcommand(1);

  Overrides o;
  std::optional<std::string> config;

  auto* synth = app.add_subcommand("synth", "Monte-Carlo lambda search on synthetic graphs");
  add_run_flags(synth, o, config);
  add_model_flags(synth, o);
  synth->add_option("--p", o.p, "nodes");
  synth->add_option("--n", o.n, "samples (default p + 5)");
  synth->add_option("--trials", o.trials);
  synth->add_option("--graph-model", o.graph_model, "barabasi-albert | erdos-renyi");
  synth->add_option("--density", o.density);
  synth->add_option("--weight-low", o.weight_low);
  synth->add_option("--weight-high", o.weight_high);
  synth->add_option("--kappa", o.kappa);
  synth->add_option("--lambda-grid", o.lambda_grid, "comma-separated penalty weights")->delimiter(',');

  std::string data;
  auto* fit = app.add_subcommand("fit", "Fit one model to a samples CSV");
  add_run_flags(fit, o, config);
  add_model_flags(fit, o);
  fit->add_option("-d,--data", data, "CSV, header of node labels, one row per sample")
      ->required()
      ->check(CLI::ExistingFile);
  fit->add_option("--threshold", o.threshold, "edge threshold on scores in [0, 1]");

  std::string scores;
  lrcc::TruthSource truth;
  std::optional<std::string> truth_edges, coordinates;
  auto* eval = app.add_subcommand("eval", "ROC/AUC of a score matrix against ground truth");
  add_run_flags(eval, o, config);
  eval->add_option("-s,--scores", scores, "p x p score CSV with header")->required()->check(CLI::ExistingFile);
  eval->add_option("--truth", truth_edges, "edge list i,j[,weight]")->check(CLI::ExistingFile);
  eval->add_option("--coordinates", coordinates, "sensor coordinates CSV (two columns)")
      ->check(CLI::ExistingFile);
  eval->add_option("--gamma", o.gamma, "kernel bandwidth");
  eval->add_option("--beta", o.beta, "kernel threshold");

  auto* defaults = app.add_subcommand("defaults", "Print the default configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    report_error("UsageError", e.what(), kExitConfig);
    return kExitConfig;
  }

  const lrcc::RunInfo info{join_args(argc, argv)};
  try {
    if (defaults->parsed()) {
      std::cout << lrcc::to_json(lrcc::ExperimentConfig{});
      return 0;
    }
    const lrcc::ExperimentConfig cfg = resolve_config(config, o);
    if (synth->parsed()) {
      const fs::path out = output_dir(cfg, "synth");
      const auto report = lrcc::run_synth(cfg, out, info);
      std::cout << "best lambda " << report.grid.best_lambda << "  mean AUC " << report.best_mean_auc
                << "  -> " << out.string() << '\n';
    } else if (fit->parsed()) {
      const fs::path out = output_dir(cfg, "fit");
      const auto report = lrcc::run_fit(cfg, data, out, info);
      std::cout << report.graph.edge_count() << " edges over " << report.graph.p() << " nodes  ("
                << lrcc::to_string(report.fit.trace.termination) << ", "
                << report.fit.trace.iterations() << " iterations)  -> " << out.string() << '\n';
    } else if (eval->parsed()) {
      if (truth_edges) truth.edges = *truth_edges;
      if (coordinates) truth.coordinates = *coordinates;
      const fs::path out = output_dir(cfg, "eval");
      const auto curve = lrcc::run_eval(cfg, scores, truth, out, info);
      std::cout << "AUC " << curve.auc << "  -> " << out.string() << '\n';
    }
  } catch (const lrcc::Error& e) {
    const int status = exit_code(e.code());
    report_error(std::string(lrcc::to_string(e.code())), e.what(), status);
    return status;
  } catch (const std::exception& e) {
    report_error("InternalError", e.what(), kExitSolver);
    return kExitSolver;
  }
  return 0;
}
