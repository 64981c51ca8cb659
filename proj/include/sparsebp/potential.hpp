#pragma once

// Pairwise potentials with the sparse compatibility structure: a constant
// `fbar` everywhere except on a short list of compatible states per column.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sparsebp/error.hpp"

namespace sparsebp {

using Index = Eigen::Index;

/// Dense pairwise table, entry (x_i, x_j) with x_i the sending state and x_j
/// the receiving state. Column-major, so one receiving state is contiguous.
template <typename Scalar>
using DensePotential = Eigen::MatrixX<Scalar>;

/// f(x_i, x_j) = fbar unless x_i is listed in the compatible neighborhood of
/// column x_j. Stored column-compressed; each column's rows strictly increase.
template <typename Scalar>
class SparseTruncatedPotential {
 public:
  struct Entry {
    Index state;
    Scalar value;
  };

  SparseTruncatedPotential() = default;

  SparseTruncatedPotential(Index labels, Scalar fbar, const std::vector<std::vector<Entry>>& columns)
      : labels_(labels), fbar_(fbar) {
    if (labels < 1) throw InvalidModel("potential needs at least one label");
    if (static_cast<Index>(columns.size()) != labels)
      throw InvalidModel("potential needs one neighborhood list per column");
    if (!std::isfinite(static_cast<double>(fbar))) throw InvalidModel("fbar must be finite");
    col_start_.reserve(static_cast<std::size_t>(labels) + 1);
    col_start_.push_back(0);
    for (Index xj = 0; xj < labels; ++xj) {
      const auto& col = columns[static_cast<std::size_t>(xj)];
      Index prev = -1;
      for (const Entry& e : col) {
        if (e.state < 0 || e.state >= labels)
          throw InvalidModel("neighborhood state " + std::to_string(e.state) + " out of range in column " +
                             std::to_string(xj));
        if (e.state <= prev)
          throw InvalidModel("neighborhood of column " + std::to_string(xj) + " is not strictly increasing");
        if (std::isnan(static_cast<double>(e.value))) throw InvalidModel("potential value is NaN");
        prev = e.state;
        rows_.push_back(e.state);
        values_.push_back(e.value);
        residuals_.push_back(e.value - fbar_);
        if (!(e.value >= fbar_)) maxsum_safe_ = false;
      }
      max_neighborhood_ = std::max<Index>(max_neighborhood_, static_cast<Index>(col.size()));
      col_start_.push_back(static_cast<Index>(rows_.size()));
    }
  }

  Index labels() const { return labels_; }
  Scalar fbar() const { return fbar_; }
  /// Largest neighborhood size over all columns (the `m` of the O(mM) bound).
  Index max_neighborhood() const { return max_neighborhood_; }
  /// True when every listed value is >= fbar, the precondition of the fast max-sum update.
  bool maxsum_safe() const { return maxsum_safe_; }
  std::size_t nonzeros() const { return rows_.size(); }

  std::span<const Index> neighbors(Index xj) const { return column(rows_, xj); }
  std::span<const Scalar> values(Index xj) const { return column(values_, xj); }
  std::span<const Scalar> residuals(Index xj) const { return column(residuals_, xj); }

  Scalar operator()(Index xi, Index xj) const {
    auto rows = neighbors(xj);
    auto it = std::lower_bound(rows.begin(), rows.end(), xi);
    if (it != rows.end() && *it == xi) return values(xj)[static_cast<std::size_t>(it - rows.begin())];
    return fbar_;
  }

  DensePotential<Scalar> densify() const {
    DensePotential<Scalar> dense = DensePotential<Scalar>::Constant(labels_, labels_, fbar_);
    for (Index xj = 0; xj < labels_; ++xj) {
      auto rows = neighbors(xj);
      auto vals = values(xj);
      for (std::size_t k = 0; k < rows.size(); ++k) dense(rows[k], xj) = vals[k];
    }
    return dense;
  }

  /// Same potential with the roles of sender and receiver exchanged.
  SparseTruncatedPotential transposed() const {
    std::vector<std::vector<Entry>> columns(static_cast<std::size_t>(labels_));
    // Visiting source columns in ascending order keeps each new column sorted.
    for (Index xj = 0; xj < labels_; ++xj) {
      auto rows = neighbors(xj);
      auto vals = values(xj);
      for (std::size_t k = 0; k < rows.size(); ++k)
        columns[static_cast<std::size_t>(rows[k])].push_back({xj, vals[k]});
    }
    return SparseTruncatedPotential(labels_, fbar_, columns);
  }

  /// True when fbar and every listed value are >= 0 (valid as a sum-product factor).
  bool nonnegative() const {
    return fbar_ >= Scalar(0) && std::all_of(values_.begin(), values_.end(), [](Scalar v) { return v >= Scalar(0); });
  }

 private:
  template <typename T>
  std::span<const T> column(const std::vector<T>& data, Index xj) const {
    const auto begin = static_cast<std::size_t>(col_start_[static_cast<std::size_t>(xj)]);
    const auto end = static_cast<std::size_t>(col_start_[static_cast<std::size_t>(xj) + 1]);
    return std::span<const T>(data.data() + begin, end - begin);
  }

  Index labels_ = 0;
  Scalar fbar_ = Scalar(0);
  Index max_neighborhood_ = 0;
  bool maxsum_safe_ = true;
  std::vector<Index> col_start_;
  std::vector<Index> rows_;
  std::vector<Scalar> values_;
  std::vector<Scalar> residuals_;
};

using SparsePotential = SparseTruncatedPotential<double>;

namespace detail {

template <typename Scalar>
void check_truncated_linear_args(Index labels, Scalar alpha, Scalar truncation) {
  if (labels < 1) throw InvalidModel("truncated linear potential needs at least one label");
  if (!(alpha > Scalar(0))) throw InvalidModel("alpha must be positive");
  if (!(truncation > Scalar(0))) throw InvalidModel("truncation must be positive");
}

// Energy-domain entries of the truncated linear family; `to_value` maps an
// energy E to the stored value (exp(-E) or -E).
template <typename Scalar, typename ToValue>
SparseTruncatedPotential<Scalar> truncated_linear(Index labels, Scalar alpha, Scalar truncation, ToValue to_value) {
  check_truncated_linear_args(labels, alpha, truncation);
  using Entry = typename SparseTruncatedPotential<Scalar>::Entry;
  std::vector<std::vector<Entry>> columns(static_cast<std::size_t>(labels));
  for (Index xj = 0; xj < labels; ++xj) {
    for (Index xi = 0; xi < labels; ++xi) {
      const auto distance = static_cast<Scalar>(xi > xj ? xi - xj : xj - xi);
      // |xi - xj| >= T sits exactly at fbar and stays implicit.
      if (distance < truncation) columns[static_cast<std::size_t>(xj)].push_back({xi, to_value(alpha * distance)});
    }
  }
  return SparseTruncatedPotential<Scalar>(labels, to_value(alpha * truncation), columns);
}

}  // namespace detail

/// f(x_i, x_j) = exp(-alpha * min(|x_i - x_j|, T)).
template <typename Scalar = double>
SparseTruncatedPotential<Scalar> truncated_linear_potential(Index labels, Scalar alpha, Scalar truncation) {
  return detail::truncated_linear<Scalar>(labels, alpha, truncation,
                                          [](Scalar energy) { return std::exp(-energy); });
}

/// Log-domain twin of truncated_linear_potential: -alpha * min(|x_i - x_j|, T),
/// evaluated directly so large alpha*T cannot underflow.
template <typename Scalar = double>
SparseTruncatedPotential<Scalar> truncated_linear_log_potential(Index labels, Scalar alpha, Scalar truncation) {
  // 0 - E keeps the zero-energy entry at +0.0.
  return detail::truncated_linear<Scalar>(labels, alpha, truncation, [](Scalar energy) { return Scalar(0) - energy; });
}

/// Extracts the sparse structure from a dense table. Entries with
/// |v - fbar| <= tol * max(|fbar|, 1) are folded into fbar; every other entry
/// is listed with its exact value.
template <typename Derived>
SparseTruncatedPotential<typename Derived::Scalar> sparse_from_dense(const Eigen::MatrixBase<Derived>& dense,
                                                                     typename Derived::Scalar fbar,
                                                                     typename Derived::Scalar tol = 0) {
  using Scalar = typename Derived::Scalar;
  if (dense.rows() != dense.cols()) throw InvalidModel("dense potential must be square");
  if (tol < Scalar(0)) throw InvalidModel("tolerance must be nonnegative");
  const Scalar threshold = tol * std::max<Scalar>(std::abs(fbar), Scalar(1));
  using Entry = typename SparseTruncatedPotential<Scalar>::Entry;
  std::vector<std::vector<Entry>> columns(static_cast<std::size_t>(dense.cols()));
  for (Index xj = 0; xj < dense.cols(); ++xj)
    for (Index xi = 0; xi < dense.rows(); ++xi) {
      const Scalar v = dense(xi, xj);
      if (!(std::abs(v - fbar) <= threshold)) columns[static_cast<std::size_t>(xj)].push_back({xi, v});
    }
  return SparseTruncatedPotential<Scalar>(dense.rows(), fbar, columns);
}

}  // namespace sparsebp
