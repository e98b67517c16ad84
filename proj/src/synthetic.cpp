#include "lrcc/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lrcc/errors.hpp"
#include "lrcc/random.hpp"

namespace lrcc {

GraphTopology::GraphTopology(Matrix adjacency, std::vector<std::string> labels)
    : adjacency_(std::move(adjacency)), labels_(std::move(labels)) {
  require(adjacency_.rows() == adjacency_.cols(), ErrorCode::DimensionMismatch,
          "adjacency must be square");
  require(labels_.empty() || static_cast<Index>(labels_.size()) == p(),
          ErrorCode::DimensionMismatch, "label count differs from node count");
  require(adjacency_.allFinite() && (adjacency_.array() >= 0.0).all(),
          ErrorCode::InvalidArgument, "adjacency weights must be finite and nonnegative");
  require(adjacency_ == adjacency_.transpose(), ErrorCode::InvalidArgument,
          "adjacency must be symmetric");
  require(adjacency_.diagonal().isZero(0.0), ErrorCode::InvalidArgument,
          "adjacency must have a zero diagonal");
}

GraphTopology GraphTopology::from_edges(Index p, const std::vector<Edge>& edges,
                                        std::vector<std::string> labels) {
  Matrix a = Matrix::Zero(p, p);
  for (const Edge& e : edges) {
    require(e.i >= 0 && e.i < p && e.j >= 0 && e.j < p, ErrorCode::IndexOutOfRange,
            "edge endpoint out of range");
    require(e.i != e.j, ErrorCode::InvalidArgument, "self-loops are not allowed");
    a(e.i, e.j) = e.weight;
    a(e.j, e.i) = e.weight;
  }
  return GraphTopology(std::move(a), std::move(labels));
}

std::string GraphTopology::label(Index i) const {
  return labels_.empty() ? std::to_string(i) : labels_[static_cast<std::size_t>(i)];
}

std::vector<Edge> GraphTopology::edges() const {
  std::vector<Edge> out;
  for (Index i = 0; i < p(); ++i)
    for (Index j = i + 1; j < p(); ++j)
      if (adjacency_(i, j) > 0.0) out.push_back({i, j, adjacency_(i, j)});
  return out;
}

Index GraphTopology::edge_count() const {
  return static_cast<Index>((adjacency_.array() > 0.0).count() / 2);
}

std::vector<Index> GraphTopology::degrees() const {
  std::vector<Index> out(static_cast<std::size_t>(p()));
  for (Index i = 0; i < p(); ++i)
    out[static_cast<std::size_t>(i)] = (adjacency_.row(i).array() > 0.0).count();
  return out;
}

Index GraphTopology::component_count() const {
  std::vector<Index> parent(static_cast<std::size_t>(p()));
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      auto& up = parent[static_cast<std::size_t>(v)];
      up = parent[static_cast<std::size_t>(up)];
      v = up;
    }
    return v;
  };
  Index components = p();
  for (const Edge& e : edges()) {
    const Index a = find(e.i), b = find(e.j);
    if (a != b) {
      parent[static_cast<std::size_t>(a)] = b;
      --components;
    }
  }
  return components;
}

std::string_view to_string(GraphModel model) {
  return model == GraphModel::BarabasiAlbert ? "barabasi-albert" : "erdos-renyi";
}

GraphModel parse_graph_model(std::string_view name) {
  if (name == "barabasi-albert") return GraphModel::BarabasiAlbert;
  if (name == "erdos-renyi") return GraphModel::ErdosRenyi;
  throw Error(ErrorCode::InvalidArgument, "unknown graph model '" + std::string(name) + "'");
}

Index attachment_count(Index p, double density) {
  const auto m = static_cast<Index>(std::llround(density * static_cast<double>(p) / 2.0));
  return std::clamp<Index>(m, 1, std::max<Index>(1, p - 1));
}

GraphTopology random_graph(Index p, GraphModel model, double density, double weight_lo,
                           double weight_hi, std::uint64_t seed) {
  require(p >= 2, ErrorCode::InvalidArgument, "random graph needs p >= 2");
  require(density >= 0.0 && density <= 1.0, ErrorCode::InvalidArgument,
          "density must lie in [0, 1]");
  require(weight_lo > 0.0 && weight_lo < weight_hi, ErrorCode::InvalidArgument,
          "weight range must satisfy 0 < lo < hi");

  CounterRng structure(seed, 0);
  CounterRng weights(seed, 1);
  std::vector<Edge> edges;

  if (model == GraphModel::ErdosRenyi) {
    for (Index i = 0; i < p; ++i)
      for (Index j = i + 1; j < p; ++j)
        if (structure.uniform() < density) edges.push_back({i, j, 0.0});
  } else {
    const Index m = attachment_count(p, density);
    // Node m joins the m seed nodes; later nodes attach to m distinct targets drawn
    // with probability proportional to degree (one list entry per edge endpoint).
    std::vector<Index> endpoints;
    for (Index t = 0; t < m; ++t) {
      edges.push_back({t, m, 0.0});
      endpoints.push_back(t);
      endpoints.push_back(m);
    }
    std::vector<Index> targets;
    for (Index v = m + 1; v < p; ++v) {
      targets.clear();
      while (static_cast<Index>(targets.size()) < m) {
        const Index t = endpoints[structure.uniform_index(endpoints.size())];
        if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
      }
      for (Index t : targets) {
        edges.push_back({std::min(t, v), std::max(t, v), 0.0});
        endpoints.push_back(t);
        endpoints.push_back(v);
      }
    }
  }
  for (Edge& e : edges) e.weight = weights.uniform(weight_lo, weight_hi);
  return GraphTopology::from_edges(p, edges);
}

Matrix laplacian(const GraphTopology& graph) {
  Matrix l = -graph.adjacency();
  l.diagonal() = graph.adjacency().rowwise().sum();
  return l;
}

Matrix precision_from_laplacian(const Matrix& laplacian, double kappa) {
  require(kappa > 0.0, ErrorCode::InvalidArgument, "kappa must be > 0");
  require(laplacian.rows() == laplacian.cols(), ErrorCode::DimensionMismatch,
          "laplacian must be square");
  Matrix theta = laplacian;
  theta.diagonal().array() += kappa;
  return theta;
}

Matrix sample_gaussian_data(const Matrix& theta, Index n, std::uint64_t seed) {
  require(theta.rows() == theta.cols(), ErrorCode::DimensionMismatch, "precision must be square");
  require(n >= 1, ErrorCode::InvalidArgument, "sample count must be >= 1");
  const Eigen::LLT<Matrix> chol(theta);
  require(chol.info() == Eigen::Success, ErrorCode::CholeskyFailed,
          "precision matrix is not positive definite");
  CounterRng rng(seed, 2);
  Matrix z(theta.rows(), n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < theta.rows(); ++i) z(i, j) = rng.normal();
  // theta = L L^T, so x = L^-T z has covariance theta^-1.
  return chol.matrixU().solve(z);
}

SampleSet sample_gaussian(const Matrix& theta, Index n, std::uint64_t seed, SampleSet::Form form) {
  return SampleSet::from_data(sample_gaussian_data(theta, n, seed), form);
}

double kernel_affinity(double distance, double gamma) {
  return std::exp(-distance / (2.0 * gamma * gamma));
}

GraphTopology kernel_ground_truth(const SensorLayout& layout, double gamma, double beta) {
  require(layout.coords.cols() == 2, ErrorCode::DimensionMismatch,
          "sensor layout must have two coordinate columns");
  require(layout.coords.allFinite(), ErrorCode::InvalidArgument, "sensor coordinates must be finite");
  require(gamma > 0.0, ErrorCode::InvalidArgument, "kernel bandwidth must be > 0");
  require(beta > 0.0 && beta < 1.0, ErrorCode::InvalidArgument, "threshold must lie in (0, 1)");
  const Index p = layout.coords.rows();
  Matrix a = Matrix::Zero(p, p);
  for (Index i = 0; i < p; ++i) {
    for (Index j = i + 1; j < p; ++j) {
      const double d = (layout.coords.row(i) - layout.coords.row(j)).norm();
      if (kernel_affinity(d, gamma) >= beta) a(i, j) = a(j, i) = 1.0;
    }
  }
  return GraphTopology(std::move(a));
}

}  // namespace lrcc
