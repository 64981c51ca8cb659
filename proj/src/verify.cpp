#include "sparsebp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>

#include "sparsebp/bp.hpp"
#include "sparsebp/oracle.hpp"

namespace sparsebp {

double max_relative_deviation(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidModel("shape mismatch in deviation");
  double worst = 0;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i) {
      const double scale = std::max(std::abs(a(i, j)), std::abs(b(i, j)));
      if (scale > 0) worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / scale);
    }
  return worst;
}

namespace {

std::vector<Index> bfs_distances(const MrfModel& model, Index start) {
  std::vector<Index> dist(static_cast<std::size_t>(model.node_count()), -1);
  std::deque<Index> queue{start};
  dist[static_cast<std::size_t>(start)] = 0;
  while (!queue.empty()) {
    const Index u = queue.front();
    queue.pop_front();
    for (Index d : model.incoming(u)) {
      const Index v = model.source(d);
      if (dist[static_cast<std::size_t>(v)] < 0) {
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

// Gap between the two largest entries of each column.
double top2_gap(const Eigen::VectorXd& v) {
  if (v.size() < 2) return std::numeric_limits<double>::infinity();
  double first = -std::numeric_limits<double>::infinity();
  double second = first;
  for (Index k = 0; k < v.size(); ++k) {
    if (v[k] > first) {
      second = first;
      first = v[k];
    } else if (v[k] > second) {
      second = v[k];
    }
  }
  return first - second;
}

}  // namespace

Index tree_diameter(const MrfModel& model) {
  if (!model.is_tree()) throw InvalidModel("diameter requested for a model that is not a tree");
  if (model.node_count() <= 1) return 0;
  const auto first = bfs_distances(model, 0);
  const Index far = std::max_element(first.begin(), first.end()) - first.begin();
  const auto second = bfs_distances(model, far);
  return *std::max_element(second.begin(), second.end());
}

bool VerifyReport::passed() const {
  if (!(sum_message_rel_dev <= options.sum_rel_tol)) return false;
  if (!(sum_belief_rel_dev <= options.sum_rel_tol)) return false;
  if (sum_label_mismatches != 0) return false;
  if (max_checked && (!max_messages_identical || max_label_mismatches != 0)) return false;
  if (oracle_checked && (!(oracle_belief_rel_dev <= options.oracle_rel_tol) || oracle_map_mismatches != 0)) return false;
  return true;
}

std::string VerifyReport::format() const {
  std::ostringstream out;
  out << "nodes=" << nodes << " M=" << labels << " sweeps=" << sweeps << "\n";
  out << "sum-product: max_message_rel_dev=" << sum_message_rel_dev << " max_belief_rel_dev=" << sum_belief_rel_dev
      << " label_mismatches=" << sum_label_mismatches << "/" << sum_labels_checked << "\n";
  if (max_checked)
    out << "max-sum: messages_identical=" << (max_messages_identical ? "yes" : "no")
        << " label_mismatches=" << max_label_mismatches << "\n";
  else
    out << "max-sum: skipped (no fast-safe log-domain form)\n";
  if (oracle_checked)
    out << "oracle: max_belief_rel_dev=" << oracle_belief_rel_dev << " map_mismatches=" << oracle_map_mismatches << "/"
        << oracle_map_checked << "\n";
  if (pruned_checked) {
    if (pruned_error.empty())
      out << "pruned-vs-fast: label_disagreement=" << pruned_label_mismatches << "/" << nodes
          << " (expected divergence when fbar > 0)\n";
    else
      out << "pruned-vs-fast: pruned run failed: " << pruned_error << " (expected divergence)\n";
  }
  out << (passed() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

VerifyReport verify_model(const MrfModel& model, const VerifyOptions& options) {
  VerifyReport report;
  report.options = options;
  report.nodes = model.node_count();
  report.labels = model.labels();
  report.sweeps = options.sweeps;
  if (!model.all_sparse()) throw InvalidModel("verification needs sparse potentials on every edge");

  const SweepSchedule schedule = SweepSchedule::for_model(model);

  const MessageStore sum_standard = run_sweeps(model, schedule, options.sweeps, Kernel::Standard, Domain::SumProduct);
  const MessageStore sum_fast = run_sweeps(model, schedule, options.sweeps, Kernel::Fast, Domain::SumProduct);
  report.sum_message_rel_dev = max_relative_deviation(sum_standard.matrix(), sum_fast.matrix());
  const BeliefTable b_standard = compute_beliefs(model, sum_standard);
  const BeliefTable b_fast = compute_beliefs(model, sum_fast);
  report.sum_belief_rel_dev = max_relative_deviation(b_standard.beliefs, b_fast.beliefs);
  const auto labels_standard = map_labels(b_standard.beliefs);
  const auto labels_fast = map_labels(b_fast.beliefs);
  for (Index i = 0; i < model.node_count(); ++i) {
    if (top2_gap(b_standard.beliefs.col(i)) <= options.tie_gap) continue;
    ++report.sum_labels_checked;
    if (labels_standard[static_cast<std::size_t>(i)] != labels_fast[static_cast<std::size_t>(i)]) ++report.sum_label_mismatches;
  }

  std::vector<Index> max_labels;
  if (model.all_log() && model.all_maxsum_safe()) {
    report.max_checked = true;
    const MessageStore max_standard = run_sweeps(model, schedule, options.sweeps, Kernel::Standard, Domain::MaxSum);
    const MessageStore max_fast = run_sweeps(model, schedule, options.sweeps, Kernel::Fast, Domain::MaxSum);
    report.max_messages_identical = (max_standard.matrix().array() == max_fast.matrix().array()).all();
    max_labels = map_labels(node_scores(model, max_standard));
    const auto fast_max_labels = map_labels(node_scores(model, max_fast));
    for (std::size_t i = 0; i < max_labels.size(); ++i)
      if (max_labels[i] != fast_max_labels[i]) ++report.max_label_mismatches;
  }

  if (options.oracle && model.is_tree()) {
    const ExactResult exact = enumerate_exact(model);
    report.oracle_checked = true;
    report.oracle_belief_rel_dev = std::max(max_relative_deviation(b_standard.beliefs, exact.marginals),
                                            max_relative_deviation(b_fast.beliefs, exact.marginals));
    if (report.max_checked && exact.map_unique) {
      report.oracle_map_checked = model.node_count();
      for (std::size_t i = 0; i < max_labels.size(); ++i)
        if (max_labels[i] != exact.map_config[i]) ++report.oracle_map_mismatches;
    }
  }

  if (options.pruned) {
    report.pruned_checked = true;
    try {
      const MessageStore pruned = run_sweeps(model, schedule, options.sweeps, Kernel::Pruned, Domain::SumProduct);
      const auto labels_pruned = decode_labels(model, pruned);
      for (std::size_t i = 0; i < labels_pruned.size(); ++i)
        if (labels_pruned[i] != labels_fast[i]) ++report.pruned_label_mismatches;
    } catch (const DegenerateMessage& e) {
      report.pruned_error = e.what();
    }
  }
  return report;
}

SparsePotential random_sparse_potential(std::mt19937_64& rng, Index labels, Index max_neighborhood) {
  std::uniform_real_distribution<double> fbar_dist(0.05, 0.5);
  std::uniform_real_distribution<double> excess(0.0, 1.0);
  std::uniform_int_distribution<Index> size_dist(0, std::min(max_neighborhood, labels));
  const double fbar = fbar_dist(rng);
  std::vector<Index> states(static_cast<std::size_t>(labels));
  std::iota(states.begin(), states.end(), Index{0});
  std::vector<std::vector<SparsePotential::Entry>> columns(static_cast<std::size_t>(labels));
  for (auto& column : columns) {
    std::shuffle(states.begin(), states.end(), rng);
    std::vector<Index> picked(states.begin(), states.begin() + size_dist(rng));
    std::sort(picked.begin(), picked.end());
    // 1 - U in (0, 1] keeps every listed value strictly above fbar.
    for (Index s : picked) column.push_back({s, fbar + (1.0 - excess(rng))});
  }
  return SparsePotential(labels, fbar, columns);
}

namespace {

Eigen::MatrixXd random_unaries(std::mt19937_64& rng, Index labels, Index nodes) {
  std::uniform_real_distribution<double> dist(0.05, 1.0);
  Eigen::MatrixXd g(labels, nodes);
  for (Index j = 0; j < nodes; ++j)
    for (Index i = 0; i < labels; ++i) g(i, j) = dist(rng);
  return g;
}

}  // namespace

MrfModel random_grid_instance(std::mt19937_64& rng, Index max_side, Index max_labels) {
  std::uniform_int_distribution<Index> side(1, max_side);
  std::uniform_int_distribution<Index> label_dist(2, std::max<Index>(2, max_labels));
  const Index h = side(rng);
  const Index w = side(rng);
  const Index labels = label_dist(rng);
  const Index m = std::uniform_int_distribution<Index>(1, labels)(rng);
  const bool shared = std::bernoulli_distribution(0.5)(rng);
  const GridShape shape{h, w};
  const Eigen::MatrixXd g = random_unaries(rng, labels, h * w);

  PotentialRef common = PairwisePotential::from_sparse(random_sparse_potential(rng, labels, m));
  auto pick = [&]() { return shared ? common : PairwisePotential::from_sparse(random_sparse_potential(rng, labels, m)); };
  std::vector<Edge> edges;
  for (Index r = 0; r < h; ++r)
    for (Index c = 0; c + 1 < w; ++c) edges.push_back({grid_node(shape, r, c), grid_node(shape, r, c + 1), pick()});
  for (Index r = 0; r + 1 < h; ++r)
    for (Index c = 0; c < w; ++c) edges.push_back({grid_node(shape, r, c), grid_node(shape, r + 1, c), pick()});
  return MrfModel(labels, g, std::move(edges), shape);
}

MrfModel random_tree_instance(std::mt19937_64& rng, Index max_nodes, Index max_labels) {
  const Index n = std::uniform_int_distribution<Index>(1, max_nodes)(rng);
  const Index labels = std::uniform_int_distribution<Index>(2, std::max<Index>(2, max_labels))(rng);
  const Eigen::MatrixXd g = random_unaries(rng, labels, n);
  std::vector<Edge> edges;
  for (Index v = 1; v < n; ++v) {
    const Index parent = std::uniform_int_distribution<Index>(0, v - 1)(rng);
    const Index m = std::uniform_int_distribution<Index>(0, labels)(rng);
    auto f = PairwisePotential::from_sparse(random_sparse_potential(rng, labels, m));
    if (std::bernoulli_distribution(0.5)(rng))
      edges.push_back({parent, v, f});
    else
      edges.push_back({v, parent, f});
  }
  return MrfModel(labels, g, std::move(edges));
}

}  // namespace sparsebp
