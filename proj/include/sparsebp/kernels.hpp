#pragma once

// Message-update kernels. Every kernel maps the aggregated evidence h of the
// sending node to an unnormalized message over the receiving node's states.
//
//   standard sum : out(j) = sum_i f(i,j) h(i)                       O(M^2)
//   fast sum     : out(j) = sum_{i in Nbd(j)} (f(i,j) - fbar) h(i)
//                           + fbar * sum_i h(i)                     O(mM)
//   pruned sum   : out(j) = sum_{i in Nbd(j)} f(i,j) h(i)           O(mM), lossy when fbar > 0
//   standard max : out(j) = max_i [f(i,j) + h(i)]                   O(M^2)
//   fast max     : out(j) = max( max_{i in Nbd(j)} [f(i,j) + h(i)],
//                                fbar + max_i h(i) )                O(mM), needs f >= fbar

#include <Eigen/Core>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <type_traits>

#include "sparsebp/error.hpp"
#include "sparsebp/potential.hpp"

namespace sparsebp {

enum class Domain { SumProduct, MaxSum };
enum class Kernel { Standard, Fast, Pruned };

/// Multiply-adds (sum-product) or add-compare pairs (max-sum) executed by the kernels.
struct OpCounter {
  std::uint64_t madds = 0;
  std::uint64_t updates = 0;

  OpCounter& operator+=(const OpCounter& other) {
    madds += other.madds;
    updates += other.updates;
    return *this;
  }
};

template <typename Scalar>
using VectorRef = Eigen::Ref<Eigen::VectorX<Scalar>>;
template <typename Scalar>
using ConstVectorRef = Eigen::Ref<const Eigen::VectorX<Scalar>>;

namespace detail {

inline void count(OpCounter* counter, std::uint64_t madds) {
  if (counter != nullptr) {
    counter->madds += madds;
    ++counter->updates;
  }
}

template <typename Scalar>
void check_sizes(Index h_size, Index labels, Index out_size) {
  if (h_size != labels || out_size != labels) throw InvalidModel("message length does not match potential size");
}

}  // namespace detail

template <typename Scalar>
void update_standard_sum(std::type_identity_t<ConstVectorRef<Scalar>> h, const DensePotential<Scalar>& f,
                         std::type_identity_t<VectorRef<Scalar>> out, OpCounter* counter = nullptr) {
  const Index labels = f.rows();
  detail::check_sizes<Scalar>(h.size(), labels, out.size());
  for (Index xj = 0; xj < labels; ++xj) {
    const Scalar* column = f.col(xj).data();
    Scalar acc = 0;
    for (Index xi = 0; xi < labels; ++xi) acc += column[xi] * h[xi];
    out[xj] = acc;
  }
  detail::count(counter, static_cast<std::uint64_t>(labels) * static_cast<std::uint64_t>(labels));
}

template <typename Scalar>
void update_fast_sum(std::type_identity_t<ConstVectorRef<Scalar>> h, const SparseTruncatedPotential<Scalar>& f,
                     std::type_identity_t<VectorRef<Scalar>> out, OpCounter* counter = nullptr) {
  const Index labels = f.labels();
  detail::check_sizes<Scalar>(h.size(), labels, out.size());
  Scalar total = 0;
  for (Index xi = 0; xi < labels; ++xi) total += h[xi];
  const Scalar background = f.fbar() * total;
  std::uint64_t madds = static_cast<std::uint64_t>(labels);
  for (Index xj = 0; xj < labels; ++xj) {
    const auto rows = f.neighbors(xj);
    const auto residuals = f.residuals(xj);
    Scalar acc = 0;
    for (std::size_t k = 0; k < rows.size(); ++k) acc += residuals[k] * h[rows[k]];
    out[xj] = acc + background;
    madds += rows.size() + 1;
  }
  detail::count(counter, madds);
}

/// The fbar = 0 approximation: incompatible pairs contribute nothing whatever
/// the stored fbar. Throws DegenerateMessage if every output entry is zero.
template <typename Scalar>
void update_pruned_sum(std::type_identity_t<ConstVectorRef<Scalar>> h, const SparseTruncatedPotential<Scalar>& f,
                       std::type_identity_t<VectorRef<Scalar>> out, OpCounter* counter = nullptr) {
  const Index labels = f.labels();
  detail::check_sizes<Scalar>(h.size(), labels, out.size());
  std::uint64_t madds = 0;
  bool any = false;
  for (Index xj = 0; xj < labels; ++xj) {
    const auto rows = f.neighbors(xj);
    const auto values = f.values(xj);
    Scalar acc = 0;
    for (std::size_t k = 0; k < rows.size(); ++k) acc += values[k] * h[rows[k]];
    out[xj] = acc;
    any = any || acc != Scalar(0);
    madds += rows.size();
  }
  detail::count(counter, madds);
  if (!any) throw DegenerateMessage("pruned update produced an all-zero message");
}

template <typename Scalar>
void update_standard_max(std::type_identity_t<ConstVectorRef<Scalar>> h, const DensePotential<Scalar>& f,
                         std::type_identity_t<VectorRef<Scalar>> out, OpCounter* counter = nullptr) {
  const Index labels = f.rows();
  detail::check_sizes<Scalar>(h.size(), labels, out.size());
  for (Index xj = 0; xj < labels; ++xj) {
    const Scalar* column = f.col(xj).data();
    Scalar best = -std::numeric_limits<Scalar>::infinity();
    for (Index xi = 0; xi < labels; ++xi) best = std::max(best, column[xi] + h[xi]);
    out[xj] = best;
  }
  detail::count(counter, static_cast<std::uint64_t>(labels) * static_cast<std::uint64_t>(labels));
}

/// Throws UnsafePotential when some listed value is below fbar: the shortcut
/// through max_i h(i) would then overestimate.
template <typename Scalar>
void update_fast_max(std::type_identity_t<ConstVectorRef<Scalar>> h, const SparseTruncatedPotential<Scalar>& f,
                     std::type_identity_t<VectorRef<Scalar>> out, OpCounter* counter = nullptr) {
  if (!f.maxsum_safe()) throw UnsafePotential("fast max-sum update needs every compatible value >= fbar");
  const Index labels = f.labels();
  detail::check_sizes<Scalar>(h.size(), labels, out.size());
  Scalar peak = -std::numeric_limits<Scalar>::infinity();
  for (Index xi = 0; xi < labels; ++xi) peak = std::max(peak, h[xi]);
  const Scalar background = f.fbar() + peak;
  std::uint64_t madds = static_cast<std::uint64_t>(labels);
  for (Index xj = 0; xj < labels; ++xj) {
    const auto rows = f.neighbors(xj);
    const auto values = f.values(xj);
    Scalar best = background;
    for (std::size_t k = 0; k < rows.size(); ++k) best = std::max(best, values[k] + h[rows[k]]);
    out[xj] = best;
    madds += rows.size() + 1;
  }
  detail::count(counter, madds);
}

/// Sum-product: divide by the entry sum. Max-sum: subtract the maximum.
template <typename Scalar>
void normalize(std::type_identity_t<VectorRef<Scalar>> message, Domain domain) {
  Scalar* v = message.data();
  const Index n = message.size();
  if (domain == Domain::SumProduct) {
    Scalar total = 0;
    for (Index k = 0; k < n; ++k) total += v[k];
    if (!(total > Scalar(0)) || !std::isfinite(static_cast<double>(total)))
      throw DegenerateMessage("message has no positive mass");
    for (Index k = 0; k < n; ++k) v[k] /= total;
  } else {
    Scalar peak = -std::numeric_limits<Scalar>::infinity();
    for (Index k = 0; k < n; ++k) peak = std::max(peak, v[k]);
    if (!std::isfinite(static_cast<double>(peak))) throw DegenerateMessage("max-sum message has no finite maximum");
    for (Index k = 0; k < n; ++k) v[k] -= peak;
  }
}

// By-value conveniences for tests and small callers.

template <typename Scalar>
Eigen::VectorX<Scalar> update_standard_sum(const Eigen::VectorX<Scalar>& h, const DensePotential<Scalar>& f) {
  Eigen::VectorX<Scalar> out(f.cols());
  update_standard_sum<Scalar>(h, f, out);
  return out;
}

template <typename Scalar>
Eigen::VectorX<Scalar> update_fast_sum(const Eigen::VectorX<Scalar>& h, const SparseTruncatedPotential<Scalar>& f) {
  Eigen::VectorX<Scalar> out(f.labels());
  update_fast_sum<Scalar>(h, f, out);
  return out;
}

template <typename Scalar>
Eigen::VectorX<Scalar> update_pruned_sum(const Eigen::VectorX<Scalar>& h, const SparseTruncatedPotential<Scalar>& f) {
  Eigen::VectorX<Scalar> out(f.labels());
  update_pruned_sum<Scalar>(h, f, out);
  return out;
}

template <typename Scalar>
Eigen::VectorX<Scalar> update_standard_max(const Eigen::VectorX<Scalar>& h, const DensePotential<Scalar>& f) {
  Eigen::VectorX<Scalar> out(f.cols());
  update_standard_max<Scalar>(h, f, out);
  return out;
}

template <typename Scalar>
Eigen::VectorX<Scalar> update_fast_max(const Eigen::VectorX<Scalar>& h, const SparseTruncatedPotential<Scalar>& f) {
  Eigen::VectorX<Scalar> out(f.labels());
  update_fast_max<Scalar>(h, f, out);
  return out;
}

template <typename Scalar>
Eigen::VectorX<Scalar> normalized(Eigen::VectorX<Scalar> message, Domain domain) {
  normalize<Scalar>(message, domain);
  return message;
}

}  // namespace sparsebp
