#include "sparsebp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparsebp/error.hpp"

namespace sparsebp {

namespace {

// Visits configurations in lexicographic order (node 0 most significant),
// handing each one's unnormalized log-probability to `visit`.
template <typename Visit>
void for_each_configuration(const Eigen::MatrixXd& log_unary, const std::vector<Eigen::MatrixXd>& log_pair,
                            const std::vector<Edge>& edges, Visit&& visit) {
  const Index n = log_unary.cols();
  const Index labels = log_unary.rows();
  std::vector<Index> config(static_cast<std::size_t>(n), 0);
  while (true) {
    double score = 0.0;
    for (Index i = 0; i < n; ++i) score += log_unary(config[static_cast<std::size_t>(i)], i);
    for (std::size_t e = 0; e < edges.size(); ++e)
      score += log_pair[e](config[static_cast<std::size_t>(edges[e].first)], config[static_cast<std::size_t>(edges[e].second)]);
    visit(config, score);
    Index pos = n - 1;
    while (pos >= 0 && ++config[static_cast<std::size_t>(pos)] == labels) config[static_cast<std::size_t>(pos--)] = 0;
    if (pos < 0) break;
  }
}

}  // namespace

ExactResult enumerate_exact(const MrfModel& model, double limit) {
  const Index n = model.node_count();
  const Index labels = model.labels();
  const double states = std::pow(static_cast<double>(labels), static_cast<double>(n));
  if (states > limit)
    throw StateSpaceTooLarge("joint state space " + std::to_string(states) + " exceeds the enumeration limit");

  // Log-domain factors taken straight from the product-domain tables.
  const Eigen::MatrixXd log_unary = model.unary().array().log().matrix();
  std::vector<Eigen::MatrixXd> log_pair;
  for (const Edge& e : model.edges()) log_pair.push_back(e.potential->dense(Domain::SumProduct).array().log().matrix());

  ExactResult result;
  if (n == 0) return result;

  double best = -std::numeric_limits<double>::infinity();
  double runner_up = -std::numeric_limits<double>::infinity();
  for_each_configuration(log_unary, log_pair, model.edges(), [&](const std::vector<Index>& config, double score) {
    if (score > best) {
      runner_up = best;
      best = score;
      result.map_config = config;
    } else if (score > runner_up) {
      runner_up = score;
    }
  });
  if (!std::isfinite(best)) throw InvalidModel("model assigns zero probability to every configuration");
  result.map_log_score = best;
  result.map_unique = best - runner_up > 1e-9 * std::max(1.0, std::abs(best));

  // Second pass against the running maximum keeps exp() in range.
  double z = 0.0;
  result.marginals = Eigen::MatrixXd::Zero(labels, n);
  for_each_configuration(log_unary, log_pair, model.edges(), [&](const std::vector<Index>& config, double score) {
    const double w = std::exp(score - best);
    z += w;
    for (Index i = 0; i < n; ++i) result.marginals(config[static_cast<std::size_t>(i)], i) += w;
  });
  result.marginals /= z;
  result.log_z = best + std::log(z);
  return result;
}

}  // namespace sparsebp
