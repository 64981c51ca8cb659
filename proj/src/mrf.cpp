#include "sparsebp/mrf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <utility>

namespace sparsebp {

namespace {

std::optional<SparsePotential> log_of(const SparsePotential& sum) {
  if (!(sum.fbar() > 0)) return std::nullopt;
  std::vector<std::vector<SparsePotential::Entry>> columns(static_cast<std::size_t>(sum.labels()));
  for (Index xj = 0; xj < sum.labels(); ++xj) {
    auto rows = sum.neighbors(xj);
    auto vals = sum.values(xj);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (!(vals[k] > 0)) return std::nullopt;
      columns[static_cast<std::size_t>(xj)].push_back({rows[k], std::log(vals[k])});
    }
  }
  return SparsePotential(sum.labels(), std::log(sum.fbar()), columns);
}

}  // namespace

std::shared_ptr<const PairwisePotential> PairwisePotential::from_sparse(SparsePotential sum,
                                                                        std::optional<SparsePotential> log) {
  if (!sum.nonnegative()) throw InvalidModel("sum-product potential must be nonnegative");
  if (!log) log = log_of(sum);
  if (log && log->labels() != sum.labels()) throw InvalidModel("log-domain potential has a different label count");

  std::shared_ptr<PairwisePotential> p(new PairwisePotential());
  p->labels_ = sum.labels();
  p->dense_[0][0] = sum.densify();
  p->dense_[0][1] = p->dense_[0][0].transpose();
  p->sparse_[0][1] = sum.transposed();
  p->sparse_[0][0] = std::move(sum);
  if (log) {
    p->has_log_ = true;
    p->dense_[1][0] = log->densify();
    p->dense_[1][1] = p->dense_[1][0].transpose();
    p->sparse_[1][1] = log->transposed();
    p->sparse_[1][0] = std::move(*log);
  }
  return p;
}

std::shared_ptr<const PairwisePotential> PairwisePotential::from_dense(Eigen::MatrixXd sum) {
  if (sum.rows() != sum.cols() || sum.rows() < 1) throw InvalidModel("dense potential must be square and nonempty");
  if (!sum.allFinite() || (sum.array() < 0).any()) throw InvalidModel("sum-product potential must be finite and nonnegative");
  std::shared_ptr<PairwisePotential> p(new PairwisePotential());
  p->labels_ = sum.rows();
  p->dense_[0][1] = sum.transpose();
  if ((sum.array() > 0).all()) {
    p->has_log_ = true;
    p->dense_[1][0] = sum.array().log().matrix();
    p->dense_[1][1] = p->dense_[1][0].transpose();
  }
  p->dense_[0][0] = std::move(sum);
  return p;
}

std::shared_ptr<const PairwisePotential> PairwisePotential::truncated_linear(Index labels, double alpha,
                                                                             double truncation) {
  return from_sparse(truncated_linear_potential(labels, alpha, truncation),
                     truncated_linear_log_potential(labels, alpha, truncation));
}

Index PairwisePotential::max_neighborhood() const {
  return has_sparse() ? sparse_[0][0]->max_neighborhood() : labels_;
}

void PairwisePotential::check_domain(Domain domain) const {
  if (domain == Domain::MaxSum && !has_log_) throw InvalidModel("potential has no finite log-domain form");
}

const Eigen::MatrixXd& PairwisePotential::dense(Domain domain, bool reversed) const {
  check_domain(domain);
  return dense_[slot(domain)][reversed ? 1 : 0];
}

const SparsePotential& PairwisePotential::sparse(Domain domain, bool reversed) const {
  check_domain(domain);
  const auto& s = sparse_[slot(domain)][reversed ? 1 : 0];
  if (!s) throw InvalidModel("potential has no sparse form");
  return *s;
}

MrfModel::MrfModel(Index labels, Eigen::MatrixXd unary, std::vector<Edge> edges, std::optional<GridShape> grid,
                   std::optional<Eigen::MatrixXd> log_unary)
    : labels_(labels), unary_(std::move(unary)), edges_(std::move(edges)), grid_(grid) {
  if (labels_ < 1) throw InvalidModel("label count must be positive");
  if (unary_.rows() != labels_) throw InvalidModel("unary table must have one row per label");
  const Index n = unary_.cols();
  for (Index i = 0; i < n; ++i) {
    const auto g = unary_.col(i);
    if (!g.allFinite() || (g.array() < 0).any())
      throw InvalidModel("unary of node " + std::to_string(i) + " has a negative or non-finite entry");
    if (!(g.array() > 0).any()) throw InvalidModel("unary of node " + std::to_string(i) + " has no positive entry");
  }
  if (log_unary) {
    if (log_unary->rows() != labels_ || log_unary->cols() != n) throw InvalidModel("log unary table has the wrong shape");
    log_unary_ = std::move(*log_unary);
  } else {
    log_unary_ = unary_.array().log().matrix();
  }

  std::set<std::pair<Index, Index>> seen;
  std::vector<Index> degree(static_cast<std::size_t>(n), 0);
  for (const Edge& e : edges_) {
    if (e.first < 0 || e.first >= n || e.second < 0 || e.second >= n) throw InvalidModel("edge endpoint out of range");
    if (e.first == e.second) throw InvalidModel("self-edge on node " + std::to_string(e.first));
    if (!e.potential) throw InvalidModel("edge without a potential");
    if (e.potential->labels() != labels_) throw InvalidModel("edge potential has a different label count");
    if (!seen.insert(std::minmax(e.first, e.second)).second)
      throw InvalidModel("duplicate edge " + std::to_string(e.first) + "-" + std::to_string(e.second));
    ++degree[static_cast<std::size_t>(e.first)];
    ++degree[static_cast<std::size_t>(e.second)];
  }

  if (grid_) {
    const Index h = grid_->height;
    const Index w = grid_->width;
    if (h < 1 || w < 1 || h * w != n) throw InvalidModel("grid shape does not match node count");
    if (edge_count() != h * (w - 1) + w * (h - 1)) throw InvalidModel("grid edge count mismatch");
    for (Index r = 0; r < h; ++r)
      for (Index c = 0; c + 1 < w; ++c) {
        const Edge& e = edges_[static_cast<std::size_t>(grid_horizontal_edge(*grid_, r, c))];
        if (e.first != grid_node(*grid_, r, c) || e.second != grid_node(*grid_, r, c + 1))
          throw InvalidModel("grid horizontal edges out of order");
      }
    for (Index r = 0; r + 1 < h; ++r)
      for (Index c = 0; c < w; ++c) {
        const Edge& e = edges_[static_cast<std::size_t>(grid_vertical_edge(*grid_, r, c))];
        if (e.first != grid_node(*grid_, r, c) || e.second != grid_node(*grid_, r + 1, c))
          throw InvalidModel("grid vertical edges out of order");
      }
  }

  incoming_start_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (Index i = 0; i < n; ++i)
    incoming_start_[static_cast<std::size_t>(i) + 1] = incoming_start_[static_cast<std::size_t>(i)] + degree[static_cast<std::size_t>(i)];
  incoming_.assign(static_cast<std::size_t>(directed_edge_count()), 0);
  std::vector<Index> fill(incoming_start_.begin(), incoming_start_.end() - 1);
  for (Index d = 0; d < directed_edge_count(); ++d) incoming_[static_cast<std::size_t>(fill[static_cast<std::size_t>(target(d))]++)] = d;
}

Index MrfModel::source(Index directed) const {
  const Edge& e = edges_[static_cast<std::size_t>(directed / 2)];
  return reversed(directed) ? e.second : e.first;
}

Index MrfModel::target(Index directed) const {
  const Edge& e = edges_[static_cast<std::size_t>(directed / 2)];
  return reversed(directed) ? e.first : e.second;
}

std::span<const Index> MrfModel::incoming(Index node) const {
  const auto begin = static_cast<std::size_t>(incoming_start_[static_cast<std::size_t>(node)]);
  const auto end = static_cast<std::size_t>(incoming_start_[static_cast<std::size_t>(node) + 1]);
  return {incoming_.data() + begin, end - begin};
}

Index MrfModel::find_directed(Index node, Index neighbor) const {
  for (Index d : incoming(node))
    if (source(d) == neighbor) return reverse(d);
  return -1;
}

bool MrfModel::all_sparse() const {
  return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.potential->has_sparse(); });
}

bool MrfModel::all_log() const {
  return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.potential->has_log(); });
}

bool MrfModel::all_maxsum_safe() const {
  return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) {
    return e.potential->has_sparse() && e.potential->has_log() &&
           e.potential->sparse(Domain::MaxSum).maxsum_safe();
  });
}

Index MrfModel::max_neighborhood() const {
  Index m = 0;
  for (const Edge& e : edges_) m = std::max(m, e.potential->max_neighborhood());
  return m;
}

bool MrfModel::is_tree() const {
  const Index n = node_count();
  if (edge_count() != n - 1) return false;
  std::vector<Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  for (const Edge& e : edges_) {
    const Index a = find(e.first);
    const Index b = find(e.second);
    if (a == b) return false;
    parent[static_cast<std::size_t>(a)] = b;
  }
  return true;
}

MrfModel build_grid_mrf(Index height, Index width, Index labels, const UnaryProvider& unary, PotentialRef pairwise,
                        const UnaryProvider& log_unary) {
  if (height < 1 || width < 1) throw InvalidModel("grid dimensions must be positive");
  if (!pairwise) throw InvalidModel("grid needs a pairwise potential");
  const GridShape shape{height, width};
  Eigen::MatrixXd table(labels, height * width);
  std::optional<Eigen::MatrixXd> log_table;
  if (log_unary) log_table.emplace(labels, height * width);
  for (Index r = 0; r < height; ++r)
    for (Index c = 0; c < width; ++c) {
      const Index node = grid_node(shape, r, c);
      Eigen::VectorXd g = unary(r, c);
      if (g.size() != labels) throw InvalidModel("unary vector at node " + std::to_string(node) + " has the wrong length");
      table.col(node) = g;
      if (log_table) {
        Eigen::VectorXd lg = log_unary(r, c);
        if (lg.size() != labels) throw InvalidModel("log unary vector has the wrong length");
        log_table->col(node) = lg;
      }
    }

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(height * (width - 1) + width * (height - 1)));
  for (Index r = 0; r < height; ++r)
    for (Index c = 0; c + 1 < width; ++c) edges.push_back({grid_node(shape, r, c), grid_node(shape, r, c + 1), pairwise});
  for (Index r = 0; r + 1 < height; ++r)
    for (Index c = 0; c < width; ++c) edges.push_back({grid_node(shape, r, c), grid_node(shape, r + 1, c), pairwise});
  return MrfModel(labels, std::move(table), std::move(edges), shape, std::move(log_table));
}

}  // namespace sparsebp
