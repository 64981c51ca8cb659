#include "sparsebp/bp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

namespace sparsebp {

MessageStore::MessageStore(Index labels, Index directed_edges, Domain domain)
    : domain_(domain),
      data_(Eigen::MatrixXd::Constant(labels, directed_edges,
                                      domain == Domain::SumProduct ? 1.0 / static_cast<double>(labels) : 0.0)) {}

SweepSchedule SweepSchedule::grid(const MrfModel& model) {
  if (!model.grid()) throw InvalidModel("grid schedule needs a grid model");
  const GridShape g = *model.grid();
  SweepSchedule s;
  s.passes.resize(4);
  for (Index r = 0; r < g.height; ++r) {
    std::vector<Index> right, left;
    for (Index c = 0; c + 1 < g.width; ++c) right.push_back(2 * grid_horizontal_edge(g, r, c));
    for (Index c = g.width - 1; c >= 1; --c) left.push_back(2 * grid_horizontal_edge(g, r, c - 1) + 1);
    if (!right.empty()) {
      s.passes[0].chains.push_back(std::move(right));
      s.passes[1].chains.push_back(std::move(left));
    }
  }
  for (Index c = 0; c < g.width; ++c) {
    std::vector<Index> down, up;
    for (Index r = 0; r + 1 < g.height; ++r) down.push_back(2 * grid_vertical_edge(g, r, c));
    for (Index r = g.height - 1; r >= 1; --r) up.push_back(2 * grid_vertical_edge(g, r - 1, c) + 1);
    if (!down.empty()) {
      s.passes[2].chains.push_back(std::move(down));
      s.passes[3].chains.push_back(std::move(up));
    }
  }
  return s;
}

SweepSchedule SweepSchedule::edge_order(const MrfModel& model) {
  SweepSchedule s;
  std::vector<Index> forward, backward;
  for (Index e = 0; e < model.edge_count(); ++e) forward.push_back(2 * e);
  for (Index e = model.edge_count() - 1; e >= 0; --e) backward.push_back(2 * e + 1);
  s.passes.push_back({{std::move(forward)}});
  s.passes.push_back({{std::move(backward)}});
  return s;
}

SweepSchedule SweepSchedule::for_model(const MrfModel& model) {
  return model.grid() ? grid(model) : edge_order(model);
}

namespace {

// h for the message along `directed`, written into `h`.
void gather_h(const MrfModel& model, const MessageStore& messages, Index directed, Eigen::VectorXd& h) {
  const Index node = model.source(directed);
  const Index skip = MrfModel::reverse(directed);
  const Index n = model.labels();
  const bool product = messages.domain() == Domain::SumProduct;
  const double* base = (product ? model.unary() : model.log_unary()).col(node).data();
  double* out = h.data();
  std::copy(base, base + n, out);
  for (Index d : model.incoming(node)) {
    if (d == skip) continue;
    const double* m = messages.matrix().col(d).data();
    if (product)
      for (Index k = 0; k < n; ++k) out[k] *= m[k];
    else
      for (Index k = 0; k < n; ++k) out[k] += m[k];
  }
}

}  // namespace

Eigen::VectorXd compute_h(const MrfModel& model, const MessageStore& messages, Index node, Index excluded) {
  const Index directed = model.find_directed(node, excluded);
  if (directed < 0)
    throw InvalidModel("node " + std::to_string(excluded) + " is not a neighbor of node " + std::to_string(node));
  Eigen::VectorXd h(model.labels());
  gather_h(model, messages, directed, h);
  return h;
}

void update_message(const MrfModel& model, MessageStore& messages, Index directed, Kernel kernel,
                    Eigen::VectorXd& scratch, OpCounter* counter) {
  gather_h(model, messages, directed, scratch);
  const PairwisePotential& f = model.potential(directed);
  const bool reversed = model.reversed(directed);
  const Domain domain = messages.domain();
  auto out = messages[directed];
  try {
    if (domain == Domain::SumProduct) {
      switch (kernel) {
        case Kernel::Standard:
          update_standard_sum<double>(scratch, f.dense(domain, reversed), out, counter);
          break;
        case Kernel::Fast:
          update_fast_sum<double>(scratch, f.sparse(domain, reversed), out, counter);
          break;
        case Kernel::Pruned:
          update_pruned_sum<double>(scratch, f.sparse(domain, reversed), out, counter);
          break;
      }
    } else {
      switch (kernel) {
        case Kernel::Standard:
          update_standard_max<double>(scratch, f.dense(domain, reversed), out, counter);
          break;
        case Kernel::Fast:
          update_fast_max<double>(scratch, f.sparse(domain, reversed), out, counter);
          break;
        case Kernel::Pruned:
          throw InvalidModel("the pruned kernel is defined for sum-product only");
      }
    }
    normalize<double>(out, domain);
  } catch (const DegenerateMessage& e) {
    const Index from = model.source(directed);
    const Index to = model.target(directed);
    throw DegenerateMessage(std::string(e.what()) + " on edge " + std::to_string(from) + " -> " + std::to_string(to),
                            static_cast<std::size_t>(from), static_cast<std::size_t>(to));
  }
}

namespace {

void check_kernel(const MrfModel& model, Kernel kernel, Domain domain) {
  if (domain == Domain::MaxSum && !model.all_log()) throw InvalidModel("max-sum needs finite log-domain potentials");
  if (kernel == Kernel::Standard) return;
  if (kernel == Kernel::Pruned && domain == Domain::MaxSum)
    throw InvalidModel("the pruned kernel is defined for sum-product only");
  if (!model.all_sparse()) throw InvalidModel("fast and pruned kernels need sparse potentials on every edge");
  if (kernel == Kernel::Fast && domain == Domain::MaxSum && !model.all_maxsum_safe())
    throw UnsafePotential("fast max-sum needs every compatible value >= fbar on every edge");
}

void run_chains(const MrfModel& model, MessageStore& messages, const DirectionalPass& pass, Kernel kernel,
                int threads, OpCounter* counter) {
  const auto chain_count = pass.chains.size();
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), chain_count);
  if (workers <= 1) {
    Eigen::VectorXd scratch(model.labels());
    for (const auto& chain : pass.chains)
      for (Index d : chain) update_message(model, messages, d, kernel, scratch, counter);
    return;
  }

  std::vector<OpCounter> counts(workers);
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          Eigen::VectorXd scratch(model.labels());
          // Static striping keeps the assignment deterministic.
          for (std::size_t c = w; c < chain_count; c += workers)
            for (Index d : pass.chains[c]) update_message(model, messages, d, kernel, scratch, &counts[w]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  if (counter != nullptr)
    for (const auto& c : counts) *counter += c;
}

}  // namespace

MessageStore run_sweeps(const MrfModel& model, const SweepSchedule& schedule, int n_sweeps, Kernel kernel,
                        Domain domain, const SweepOptions& options) {
  if (n_sweeps < 0) throw InvalidModel("sweep count must be nonnegative");
  check_kernel(model, kernel, domain);
  MessageStore messages(model.labels(), model.directed_edge_count(), domain);
  Eigen::MatrixXd previous;
  for (int sweep = 1; sweep <= n_sweeps; ++sweep) {
    if (options.convergence_tolerance > 0) previous = messages.matrix();
    const auto start = std::chrono::steady_clock::now();
    for (const auto& pass : schedule.passes) run_chains(model, messages, pass, kernel, options.threads, options.counter);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    if (options.on_sweep) options.on_sweep(sweep, elapsed.count());
    if (options.convergence_tolerance > 0 && messages.size() > 0 &&
        (messages.matrix() - previous).cwiseAbs().maxCoeff() < options.convergence_tolerance)
      break;
  }
  return messages;
}

BeliefTable compute_beliefs(const MrfModel& model, const MessageStore& messages) {
  if (messages.domain() != Domain::SumProduct) throw InvalidModel("beliefs need a sum-product message store");
  BeliefTable table{model.unary(), Eigen::VectorXd(model.node_count())};
  for (Index i = 0; i < model.node_count(); ++i) {
    auto b = table.beliefs.col(i);
    for (Index d : model.incoming(i)) b.array() *= messages[d].array();
    const double z = b.sum();
    if (!(z > 0) || !std::isfinite(z))
      throw DegenerateMessage("belief of node " + std::to_string(i) + " has no positive mass",
                              static_cast<std::size_t>(i), static_cast<std::size_t>(i));
    b /= z;
    table.normalizers[i] = z;
  }
  return table;
}

Eigen::MatrixXd node_scores(const MrfModel& model, const MessageStore& messages) {
  if (messages.domain() != Domain::MaxSum) throw InvalidModel("node scores need a max-sum message store");
  Eigen::MatrixXd scores = model.log_unary();
  for (Index i = 0; i < model.node_count(); ++i)
    for (Index d : model.incoming(i)) scores.col(i) += messages[d];
  return scores;
}

std::vector<Index> map_labels(const Eigen::MatrixXd& scores) {
  std::vector<Index> labels(static_cast<std::size_t>(scores.cols()));
  for (Index i = 0; i < scores.cols(); ++i) labels[static_cast<std::size_t>(i)] = argmax_lowest(scores.col(i));
  return labels;
}

std::vector<Index> decode_labels(const MrfModel& model, const MessageStore& messages) {
  if (messages.domain() == Domain::SumProduct) return map_labels(compute_beliefs(model, messages).beliefs);
  return map_labels(node_scores(model, messages));
}

}  // namespace sparsebp
