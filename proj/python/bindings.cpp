#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lrcc/errors.hpp"
#include "lrcc/evaluation.hpp"
#include "lrcc/experiment.hpp"
#include "lrcc/optimizer.hpp"
#include "lrcc/synthetic.hpp"

namespace py = pybind11;
using namespace lrcc;

namespace {

ProductPoint make_point(const Matrix& w, const Vector& sigma) {
  return ProductPoint(ObliqueFactor(w), ScaleVector(sigma));
}

SampleSet make_samples(const std::optional<Matrix>& x, const std::optional<Matrix>& s, Index n) {
  if (x.has_value() == s.has_value())
    throw Error(ErrorCode::InvalidArgument, "pass exactly one of X (p x n data) or S (covariance)");
  if (x) return SampleSet::from_data(*x);
  return SampleSet::from_covariance(*s, n);
}

py::dict trace_dict(const SolveTrace& trace) {
  std::vector<double> value, grad_norm, step, seconds;
  std::vector<int> backtracks;
  for (const IterationRecord& r : trace.records) {
    value.push_back(r.value);
    grad_norm.push_back(r.grad_norm);
    step.push_back(r.step);
    backtracks.push_back(r.backtracks);
    seconds.push_back(r.seconds);
  }
  py::dict d;
  d["value"] = value;
  d["grad_norm"] = grad_norm;
  d["step"] = step;
  d["backtracks"] = backtracks;
  d["seconds"] = seconds;
  d["termination"] = std::string(to_string(trace.termination));
  d["iterations"] = trace.iterations();
  d["reinitializations"] = trace.reinitializations;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Low-rank conditional-correlation graph learning on (OB(p,k)/O(k)) x R++^p.";
  m.attr("__version__") = version();

  static py::exception<Error> error(m, "LrccError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object instance = py::handle(error.ptr())(e.what());
      instance.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error.ptr(), instance.ptr());
    }
  });

  // geometry
  m.def("project_to_manifold", [](const Matrix& z) { return oblique::project_to_manifold(z).matrix(); },
        py::arg("Z"), "Row-normalize Z onto the oblique manifold.");
  m.def("tangent_project",
        [](const Matrix& w, const Matrix& z) { return oblique::tangent_project(ObliqueFactor(w), z); },
        py::arg("W"), py::arg("Z"));
  m.def("horizontal_project",
        [](const Matrix& w, const Matrix& xi) { return oblique::horizontal_project(ObliqueFactor(w), xi); },
        py::arg("W"), py::arg("xi"));
  m.def("retract",
        [](const Matrix& w, const Matrix& xi, double t) { return oblique::retract(ObliqueFactor(w), xi, t).matrix(); },
        py::arg("W"), py::arg("xi"), py::arg("t") = 1.0);

  // model
  m.def("precision",
        [](const Matrix& w, const Vector& sigma) { return PrecisionModel(ObliqueFactor(w), ScaleVector(sigma)).dense(); },
        py::arg("W"), py::arg("sigma"), "Dense diag(sigma) W W^T diag(sigma).");
  m.def("logdet_k",
        [](const Matrix& w, const Vector& sigma) { return PrecisionModel(ObliqueFactor(w), ScaleVector(sigma)).logdet_k(); },
        py::arg("W"), py::arg("sigma"));
  m.def("pseudo_inverse",
        [](const Matrix& w, const Vector& sigma) {
          return PrecisionModel(ObliqueFactor(w), ScaleVector(sigma)).pseudo_inverse();
        },
        py::arg("W"), py::arg("sigma"));
  m.def("objective",
        [](const Matrix& w, const Vector& sigma, std::optional<Matrix> x, std::optional<Matrix> s, Index n,
           double lam, double eps) {
          const SampleSet samples = make_samples(x, s, n);
          return objective_value(ObliqueFactor(w), ScaleVector(sigma), samples, {lam, eps, w.cols()});
        },
        py::arg("W"), py::arg("sigma"), py::arg("X") = py::none(), py::arg("S") = py::none(),
        py::arg("n") = 0, py::arg("lam") = 0.0, py::arg("eps") = 1e-2);
  m.def("riemannian_gradient",
        [](const Matrix& w, const Vector& sigma, std::optional<Matrix> x, std::optional<Matrix> s, Index n,
           double lam, double eps) {
          const LrccObjective f(make_samples(x, s, n), {lam, eps, w.cols()});
          const TangentPair g = f.riemannian_gradient(make_point(w, sigma));
          return py::make_tuple(g.w_part(), g.sigma_part());
        },
        py::arg("W"), py::arg("sigma"), py::arg("X") = py::none(), py::arg("S") = py::none(),
        py::arg("n") = 0, py::arg("lam") = 0.0, py::arg("eps") = 1e-2,
        "Returns (grad_W, grad_sigma).");

  // solver
  m.def("fit",
        [](std::optional<Matrix> x, std::optional<Matrix> s, Index n, Index k, double lam, double eps,
           const std::string& method, int max_iters, double grad_tol, std::uint64_t seed) {
          SolverConfig scfg;
          scfg.method = parse_method(method);
          scfg.max_iters = max_iters;
          scfg.grad_tol = grad_tol;
          scfg.seed = seed;
          const SampleSet samples = make_samples(x, s, n);
          std::optional<SolveResult> r;
          {
            py::gil_scoped_release release;
            r = solve(samples, {lam, eps, k}, scfg);
          }
          py::dict out;
          out["W"] = r->point.w().matrix();
          out["sigma"] = r->point.sigma().vector();
          out["trace"] = trace_dict(r->trace);
          return out;
        },
        py::arg("X") = py::none(), py::arg("S") = py::none(), py::arg("n") = 0, py::arg("k") = 1,
        py::arg("lam") = 0.0, py::arg("eps") = 1e-2, py::arg("method") = "conjugate-gradient",
        py::arg("max_iters") = 1000, py::arg("grad_tol") = 1e-6, py::arg("seed") = 0,
        "Fit W (p x k) and sigma (p) to X (p x n, one row per node) or to a covariance S.");

  // evaluation
  m.def("edge_scores",
        [](const Matrix& w, const Vector& sigma, const std::string& kind) {
          return edge_scores(PrecisionModel(ObliqueFactor(w), ScaleVector(sigma)), parse_score_kind(kind));
        },
        py::arg("W"), py::arg("sigma"), py::arg("kind") = "conditional-correlation");
  m.def("roc",
        [](const Matrix& scores, const Matrix& truth) {
          const RocCurve c = roc(scores, GraphTopology(truth));
          std::vector<double> fpr, tpr, thr;
          for (const RocPoint& pt : c.points) {
            fpr.push_back(pt.fpr);
            tpr.push_back(pt.tpr);
            thr.push_back(pt.threshold);
          }
          py::dict d;
          d["auc"] = c.auc;
          d["fpr"] = fpr;
          d["tpr"] = tpr;
          d["threshold"] = thr;
          return d;
        },
        py::arg("scores"), py::arg("truth"), "ROC over node pairs; truth is a symmetric adjacency.");
  m.def("auc",
        [](const std::vector<double>& scores, const std::vector<int>& labels) {
          const std::vector<char> l(labels.begin(), labels.end());
          return roc_curve(scores, l).auc;
        },
        py::arg("scores"), py::arg("labels"));
  m.def("threshold_graph", [](const Matrix& scores, double tau) { return threshold_graph(scores, tau).adjacency(); },
        py::arg("scores"), py::arg("tau"));

  // synthetic
  m.def("random_graph",
        [](Index p, const std::string& model, double density, double lo, double hi, std::uint64_t seed) {
          return random_graph(p, parse_graph_model(model), density, lo, hi, seed).adjacency();
        },
        py::arg("p"), py::arg("model") = "barabasi-albert", py::arg("density") = 0.01, py::arg("weight_low") = 2.0,
        py::arg("weight_high") = 5.0, py::arg("seed") = 0);
  m.def("laplacian", [](const Matrix& a) { return laplacian(GraphTopology(a)); }, py::arg("adjacency"));
  m.def("precision_from_laplacian", &precision_from_laplacian, py::arg("L"), py::arg("kappa") = 0.1);
  m.def("sample_gaussian", &sample_gaussian_data, py::arg("theta"), py::arg("n"), py::arg("seed") = 0,
        "Draw n samples from N(0, theta^-1); returns X, p x n.");
  m.def("kernel_ground_truth",
        [](const Matrix& coords, double gamma, double beta) {
          return kernel_ground_truth(SensorLayout{coords}, gamma, beta).adjacency();
        },
        py::arg("coords"), py::arg("gamma") = 5.0, py::arg("beta") = 0.5);
}
