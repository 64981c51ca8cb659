#pragma once

#include <Eigen/Core>

#include <vector>

#include "sparsebp/mrf.hpp"

namespace sparsebp {

/// Exact answers for a tiny MRF, by summing over every joint configuration.
struct ExactResult {
  Eigen::MatrixXd marginals;     // M x N, columns sum to 1
  std::vector<Index> map_config; // lexicographically smallest maximizer
  double map_log_score = 0.0;    // unnormalized log-probability of map_config
  bool map_unique = true;        // runner-up is more than 1e-9 (relative) below the maximum
  double log_z = 0.0;
};

inline constexpr double kDefaultEnumerationLimit = 1e7;

/// Throws StateSpaceTooLarge when M^N exceeds `limit`.
ExactResult enumerate_exact(const MrfModel& model, double limit = kDefaultEnumerationLimit);

}  // namespace sparsebp
