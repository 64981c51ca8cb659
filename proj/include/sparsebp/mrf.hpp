#pragma once

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "sparsebp/kernels.hpp"
#include "sparsebp/potential.hpp"

namespace sparsebp {

/// A pairwise potential as the engine consumes it: both domains (product and
/// log), both orientations, dense tables for the standard kernels and, when
/// available, sparse forms for the fast and pruned kernels.
///
/// Orientation: the forward form has the edge's first node as sender (rows)
/// and its second node as receiver (columns); the reversed form is the transpose.
class PairwisePotential {
 public:
  /// `log` defaults to the elementwise logarithm of `sum`; it is left out when
  /// some entry of `sum` is zero.
  static std::shared_ptr<const PairwisePotential> from_sparse(SparsePotential sum,
                                                              std::optional<SparsePotential> log = std::nullopt);
  /// Dense-only potential: usable by the standard kernels only.
  static std::shared_ptr<const PairwisePotential> from_dense(Eigen::MatrixXd sum);
  /// exp(-alpha * min(|x_i - x_j|, T)) with its log form built analytically.
  static std::shared_ptr<const PairwisePotential> truncated_linear(Index labels, double alpha, double truncation);

  Index labels() const { return labels_; }
  bool has_sparse() const { return sparse_[0][0].has_value(); }
  bool has_log() const { return has_log_; }
  /// Largest compatible-neighborhood size, or M for a dense-only potential.
  Index max_neighborhood() const;

  const Eigen::MatrixXd& dense(Domain domain, bool reversed = false) const;
  /// Throws InvalidModel when the requested form does not exist.
  const SparsePotential& sparse(Domain domain, bool reversed = false) const;

 private:
  PairwisePotential() = default;
  static int slot(Domain d) { return d == Domain::SumProduct ? 0 : 1; }
  void check_domain(Domain domain) const;

  Index labels_ = 0;
  bool has_log_ = false;
  // [domain][reversed]
  Eigen::MatrixXd dense_[2][2];
  std::optional<SparsePotential> sparse_[2][2];
};

using PotentialRef = std::shared_ptr<const PairwisePotential>;

struct Edge {
  Index first;
  Index second;
  PotentialRef potential;
};

struct GridShape {
  Index height;
  Index width;
};

/// Pairwise MRF over N nodes sharing one label space of size M.
///
/// Directed edges are numbered from the undirected ones: 2e carries messages
/// first -> second along edge e, 2e + 1 carries second -> first.
class MrfModel {
 public:
  /// `unary` is M x N, one column per node. `log_unary` defaults to log(unary).
  MrfModel(Index labels, Eigen::MatrixXd unary, std::vector<Edge> edges, std::optional<GridShape> grid = std::nullopt,
           std::optional<Eigen::MatrixXd> log_unary = std::nullopt);

  Index labels() const { return labels_; }
  Index node_count() const { return unary_.cols(); }
  Index edge_count() const { return static_cast<Index>(edges_.size()); }
  Index directed_edge_count() const { return 2 * edge_count(); }

  const Eigen::MatrixXd& unary() const { return unary_; }
  const Eigen::MatrixXd& log_unary() const { return log_unary_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::optional<GridShape>& grid() const { return grid_; }

  Index source(Index directed) const;
  Index target(Index directed) const;
  static Index reverse(Index directed) { return directed ^ 1; }
  bool reversed(Index directed) const { return (directed & 1) != 0; }
  const PairwisePotential& potential(Index directed) const { return *edges_[static_cast<std::size_t>(directed / 2)].potential; }

  /// Directed edges whose target is `node`.
  std::span<const Index> incoming(Index node) const;
  /// Directed edge node -> neighbor, or -1 when they are not adjacent.
  Index find_directed(Index node, Index neighbor) const;

  /// Every edge potential has a sparse form.
  bool all_sparse() const;
  /// Every edge potential has a finite log form.
  bool all_log() const;
  /// Every log-domain sparse form satisfies the fast max-sum precondition.
  bool all_maxsum_safe() const;
  /// Largest compatible-neighborhood size over all edges.
  Index max_neighborhood() const;
  /// Connected and acyclic.
  bool is_tree() const;

 private:
  Index labels_;
  Eigen::MatrixXd unary_;
  Eigen::MatrixXd log_unary_;
  std::vector<Edge> edges_;
  std::optional<GridShape> grid_;
  std::vector<Index> incoming_start_;
  std::vector<Index> incoming_;
};

using UnaryProvider = std::function<Eigen::VectorXd(Index row, Index col)>;

/// 4-connected grid, nodes row-major. Edges: all horizontal pairs row by row,
/// then all vertical pairs row by row.
MrfModel build_grid_mrf(Index height, Index width, Index labels, const UnaryProvider& unary, PotentialRef pairwise,
                        const UnaryProvider& log_unary = nullptr);

inline Index grid_node(const GridShape& g, Index row, Index col) { return row * g.width + col; }
/// Edge joining (row, col) and (row, col + 1).
inline Index grid_horizontal_edge(const GridShape& g, Index row, Index col) { return row * (g.width - 1) + col; }
/// Edge joining (row, col) and (row + 1, col).
inline Index grid_vertical_edge(const GridShape& g, Index row, Index col) {
  return g.height * (g.width - 1) + row * g.width + col;
}

}  // namespace sparsebp
