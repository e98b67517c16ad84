#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lrcc/model.hpp"

namespace lrcc {

struct Edge {
  Index i;
  Index j;
  double weight;
};

/// Undirected weighted graph: symmetric nonnegative adjacency with zero diagonal.
class GraphTopology {
 public:
  explicit GraphTopology(Matrix adjacency, std::vector<std::string> labels = {});
  static GraphTopology from_edges(Index p, const std::vector<Edge>& edges,
                                  std::vector<std::string> labels = {});

  Index p() const noexcept { return adjacency_.rows(); }
  const Matrix& adjacency() const noexcept { return adjacency_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  /// Label of node i, or its index when unlabeled.
  std::string label(Index i) const;

  bool has_edge(Index i, Index j) const { return adjacency_(i, j) > 0.0; }
  /// Edges with i < j in row-major order.
  std::vector<Edge> edges() const;
  Index edge_count() const;
  std::vector<Index> degrees() const;
  Index component_count() const;

 private:
  Matrix adjacency_;
  std::vector<std::string> labels_;
};

/// Node coordinates in metres, p x 2.
struct SensorLayout {
  Matrix coords;
};

enum class GraphModel { BarabasiAlbert, ErdosRenyi };
std::string_view to_string(GraphModel model);
GraphModel parse_graph_model(std::string_view name);

/// Edges added per arriving node in the preferential-attachment model, chosen so that
/// the edge density is close to `density`: max(1, round(density * p / 2)).
Index attachment_count(Index p, double density);

/// Barabasi-Albert: preferential attachment with attachment_count(p, density) edges per
/// new node. Erdos-Renyi: each pair independently with probability `density`.
/// Edge weights are i.i.d. uniform on (weight_lo, weight_hi).
GraphTopology random_graph(Index p, GraphModel model, double density, double weight_lo,
                           double weight_hi, std::uint64_t seed);

/// L = D - A.
Matrix laplacian(const GraphTopology& graph);

/// L + kappa I.
Matrix precision_from_laplacian(const Matrix& laplacian, double kappa);

/// n draws from N(0, theta^-1) via the Cholesky factor of theta (no explicit inverse).
/// Returns X, p x n. Throws CholeskyFailed.
Matrix sample_gaussian_data(const Matrix& theta, Index n, std::uint64_t seed);
SampleSet sample_gaussian(const Matrix& theta, Index n, std::uint64_t seed,
                          SampleSet::Form form = SampleSet::Form::Automatic);

/// exp(-d(i, j) / (2 gamma^2)) for Euclidean distance d.
double kernel_affinity(double distance, double gamma);

/// Binary graph: edge iff kernel_affinity(d(i, j), gamma) >= beta, i != j.
GraphTopology kernel_ground_truth(const SensorLayout& layout, double gamma, double beta);

}  // namespace lrcc
