#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "sparsebp/mrf.hpp"

namespace sparsebp {

// Fast-versus-standard (and optional oracle and pruning) comparison of one model.

struct VerifyOptions {
  int sweeps = 10;
  /// Also compare against exact enumeration (tree models within the guard only).
  bool oracle = false;
  /// Also run the pruned kernel and report how many labels it changes.
  bool pruned = false;
  double sum_rel_tol = 1e-9;
  double oracle_rel_tol = 1e-9;
  /// Sum-product labels are only compared where the top-2 belief gap exceeds this.
  double tie_gap = 1e-6;
};

struct VerifyReport {
  Index nodes = 0;
  Index labels = 0;
  int sweeps = 0;

  double sum_message_rel_dev = 0;
  double sum_belief_rel_dev = 0;
  Index sum_labels_checked = 0;
  Index sum_label_mismatches = 0;

  bool max_checked = false;
  bool max_messages_identical = true;
  Index max_label_mismatches = 0;

  bool oracle_checked = false;
  double oracle_belief_rel_dev = 0;
  Index oracle_map_checked = 0;
  Index oracle_map_mismatches = 0;

  bool pruned_checked = false;
  Index pruned_label_mismatches = 0;
  std::string pruned_error;

  VerifyOptions options;

  /// The pruned comparison never fails a report; divergence there is expected.
  bool passed() const;
  std::string format() const;
};

VerifyReport verify_model(const MrfModel& model, const VerifyOptions& options = {});

/// Largest |a - b| / max(|a|, |b|) over matching entries (0 when both are 0).
double max_relative_deviation(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Longest shortest path, in edges, of a tree model.
Index tree_diameter(const MrfModel& model);

/// Random potential: fbar in [0.05, 0.5], each column lists up to `max_neighborhood`
/// random states with values in (fbar, fbar + 1].
SparsePotential random_sparse_potential(std::mt19937_64& rng, Index labels, Index max_neighborhood);
/// Grid of random size (sides 1..max_side) with random positive unaries.
MrfModel random_grid_instance(std::mt19937_64& rng, Index max_side, Index max_labels);
/// Random tree of 1..max_nodes nodes with per-edge random potentials.
MrfModel random_tree_instance(std::mt19937_64& rng, Index max_nodes, Index max_labels);

}  // namespace sparsebp
