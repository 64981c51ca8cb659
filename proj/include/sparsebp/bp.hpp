#pragma once

#include <Eigen/Core>

#include <functional>
#include <vector>

#include "sparsebp/kernels.hpp"
#include "sparsebp/mrf.hpp"

namespace sparsebp {

/// One length-M message per directed edge, stored as the columns of an M x 2E matrix.
class MessageStore {
 public:
  /// Uniform start: 1/M per entry (sum-product) or 0 (max-sum).
  MessageStore(Index labels, Index directed_edges, Domain domain);

  Domain domain() const { return domain_; }
  Index labels() const { return data_.rows(); }
  Index size() const { return data_.cols(); }

  auto operator[](Index directed) { return data_.col(directed); }
  auto operator[](Index directed) const { return data_.col(directed); }
  const Eigen::MatrixXd& matrix() const { return data_; }

 private:
  Domain domain_;
  Eigen::MatrixXd data_;
};

/// A directional pass is a set of chains. Within a chain, directed edges are
/// updated in order and each update sees the previous ones; distinct chains
/// share no state, so they may run concurrently.
struct DirectionalPass {
  std::vector<std::vector<Index>> chains;
};

struct SweepSchedule {
  std::vector<DirectionalPass> passes;

  /// Left-to-right, right-to-left, top-to-bottom, bottom-to-top; one chain per
  /// row (horizontal passes) or column (vertical passes).
  static SweepSchedule grid(const MrfModel& model);
  /// Every edge first -> second in edge order, then second -> first in reverse order.
  static SweepSchedule edge_order(const MrfModel& model);
  /// grid() for grid models, edge_order() otherwise.
  static SweepSchedule for_model(const MrfModel& model);
};

struct SweepOptions {
  /// Workers for chain-parallel passes; results are identical to threads = 1.
  int threads = 1;
  /// Stop after a sweep whose largest absolute message change is below this.
  /// Zero disables the test and runs exactly n_sweeps.
  double convergence_tolerance = 0.0;
  OpCounter* counter = nullptr;
  /// Called after every sweep with its 1-based index and wall-clock seconds.
  std::function<void(int sweep, double seconds)> on_sweep;
};

/// h(x_i) for the message node -> excluded: the unary of `node` combined with
/// every incoming message except the one from `excluded` (product in
/// sum-product, log-domain sum in max-sum). Throws if they are not adjacent.
Eigen::VectorXd compute_h(const MrfModel& model, const MessageStore& messages, Index node, Index excluded);

/// Recomputes one directed message in place and normalizes it.
void update_message(const MrfModel& model, MessageStore& messages, Index directed, Kernel kernel,
                    Eigen::VectorXd& scratch, OpCounter* counter = nullptr);

MessageStore run_sweeps(const MrfModel& model, const SweepSchedule& schedule, int n_sweeps, Kernel kernel,
                        Domain domain, const SweepOptions& options = {});

struct BeliefTable {
  Eigen::MatrixXd beliefs;       // M x N, columns sum to 1
  Eigen::VectorXd normalizers;   // Z_i before normalization
};

BeliefTable compute_beliefs(const MrfModel& model, const MessageStore& messages);

/// Max-sum node scores: log unary plus every incoming message (max-marginals up to a constant).
Eigen::MatrixXd node_scores(const MrfModel& model, const MessageStore& messages);

/// Per-column argmax, ties to the lowest state.
std::vector<Index> map_labels(const Eigen::MatrixXd& scores);

template <typename Derived>
Index argmax_lowest(const Eigen::MatrixBase<Derived>& v) {
  Index best = 0;
  for (Index k = 1; k < v.size(); ++k)
    if (v[k] > v[best]) best = k;
  return best;
}

/// Beliefs for sum-product stores, node scores for max-sum stores, then map_labels.
std::vector<Index> decode_labels(const MrfModel& model, const MessageStore& messages);

}  // namespace sparsebp
