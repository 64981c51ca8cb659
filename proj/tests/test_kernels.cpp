#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "sparsebp/kernels.hpp"
#include "sparsebp/verify.hpp"

using namespace sparsebp;

namespace {

Eigen::MatrixXd three_by_three() {
  Eigen::MatrixXd f(3, 3);
  f << 1, .5, .1,
       .5, 1, .5,
       .1, .5, 1;
  return f;
}

bool bitwise_equal(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

}  // namespace

TEST_CASE("standard sum-product update") {
  const Eigen::MatrixXd f = three_by_three();
  const Eigen::VectorXd out = update_standard_sum<double>(Eigen::Vector3d(1, 1, 1), f);
  CHECK(out[0] == doctest::Approx(1.6));
  CHECK(out[1] == doctest::Approx(2.0));
  CHECK(out[2] == doctest::Approx(1.6));

  CHECK(update_standard_sum<double>(Eigen::Vector3d::Zero(), f).isZero(0));

  const Eigen::Vector3d h(0.3, 2.0, 0.7);
  const Eigen::VectorXd flat = update_standard_sum<double>(h, Eigen::MatrixXd::Constant(3, 3, 0.25));
  for (Index k = 0; k < 3; ++k) CHECK(flat[k] == doctest::Approx(0.25 * h.sum()));
}

TEST_CASE("fast sum-product update") {
  const auto sparse = sparse_from_dense(three_by_three(), 0.1);
  const Eigen::Vector3d ones(1, 1, 1);
  const Eigen::VectorXd fast = update_fast_sum<double>(ones, sparse);
  const Eigen::VectorXd standard = update_standard_sum<double>(ones, three_by_three());
  // (1 - .1) + (.5 - .1) + .1 * 3 = 1.6 for x_j = 0.
  CHECK(fast[0] == doctest::Approx(1.6).epsilon(1e-12));
  CHECK(fast[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fast[2] == doctest::Approx(1.6).epsilon(1e-12));
  CHECK(max_relative_deviation(fast, standard) <= 1e-12);

  const auto empty = sparse_from_dense(Eigen::MatrixXd::Constant(3, 3, 0.4), 0.4);
  const Eigen::Vector3d h(0.2, 0.5, 0.9);
  const Eigen::VectorXd flat = update_fast_sum<double>(h, empty);
  for (Index k = 0; k < 3; ++k) CHECK(flat[k] == doctest::Approx(0.4 * h.sum()));
}

TEST_CASE("pruned sum-product update") {
  const auto sparse = sparse_from_dense(three_by_three(), 0.1);
  const Eigen::VectorXd out = update_pruned_sum<double>(Eigen::Vector3d(1, 1, 1), sparse);
  CHECK(out[0] == doctest::Approx(1.5));
  CHECK(out[1] == doctest::Approx(2.0));
  CHECK(out[2] == doctest::Approx(1.5));

  const auto empty = sparse_from_dense(Eigen::MatrixXd::Constant(3, 3, 0.4), 0.4);
  CHECK_THROWS_AS(update_pruned_sum<double>(Eigen::Vector3d(1, 1, 1), empty), DegenerateMessage);

  // With fbar = 0 the fast and pruned updates coincide exactly.
  Eigen::MatrixXd zeroed = three_by_three();
  zeroed(0, 2) = zeroed(2, 0) = 0;
  const auto zero_fbar = sparse_from_dense(zeroed, 0.0);
  const Eigen::Vector3d h(0.3, 0.1, 0.6);
  CHECK(bitwise_equal(update_fast_sum<double>(h, zero_fbar), update_pruned_sum<double>(h, zero_fbar)));
}

TEST_CASE("standard max-sum update") {
  Eigen::MatrixXd f = Eigen::MatrixXd::Constant(3, 3, -2.0);
  f.col(0) << 0, -1, -2;
  const Eigen::VectorXd out = update_standard_max<double>(Eigen::Vector3d(0.5, 0, -3), f);
  CHECK(out[0] == 0.5);  // max(0.5, -1, -5)

  const Eigen::VectorXd col = update_standard_max<double>(Eigen::Vector3d::Zero(), f);
  CHECK(col[0] == 0.0);

  const Eigen::Vector3d h(0.2, -0.4, 1.1);
  const Eigen::VectorXd flat = update_standard_max<double>(h, Eigen::MatrixXd::Constant(3, 3, -0.7));
  for (Index k = 0; k < 3; ++k) CHECK(flat[k] == -0.7 + 1.1);
}

TEST_CASE("fast max-sum update") {
  using E = SparsePotential::Entry;
  const SparsePotential f(3, -2.0, {{E{0, 0.0}, E{1, -1.0}}, {}, {}});
  const Eigen::Vector3d h(0.5, 0, -3);
  const Eigen::VectorXd out = update_fast_max<double>(h, f);
  CHECK(out[0] == 0.5);          // max(max(0.5, -1), -2 + 0.5)
  CHECK(out[1] == -2.0 + 0.5);   // empty column: fbar + max h
  CHECK(bitwise_equal(out, update_standard_max<double>(h, f.densify())));

  const SparsePotential unsafe(2, 0.0, {{E{0, -1.0}}, {}});
  CHECK_THROWS_AS(update_fast_max<double>(Eigen::Vector2d(0, 0), unsafe), UnsafePotential);
}

TEST_CASE("normalize") {
  Eigen::VectorXd m(3);
  m << 1.6, 2.0, 1.6;
  normalize<double>(m, Domain::SumProduct);
  CHECK(m[0] == doctest::Approx(1.6 / 5.2));
  CHECK(m[1] == doctest::Approx(0.38461538461).epsilon(1e-10));
  CHECK(m.sum() == doctest::Approx(1.0).epsilon(1e-15));

  Eigen::VectorXd l(3);
  l << 0.5, -1, -1.5;
  normalize<double>(l, Domain::MaxSum);
  CHECK(l[0] == 0.0);
  CHECK(l[1] == -1.5);
  CHECK(l[2] == -2.0);

  CHECK(normalized<double>(Eigen::Vector2d(1, 1), Domain::SumProduct).isApprox(Eigen::Vector2d(0.5, 0.5)));
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
  CHECK_THROWS_AS(normalize<double>(zero, Domain::SumProduct), DegenerateMessage);
}

TEST_CASE("randomized exactness of the fast updates") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> log_h(-30.0, 0.0);
  for (Index labels : {Index{1}, Index{4}, Index{16}, Index{64}}) {
    for (int trial = 0; trial < 100; ++trial) {
      const Index m = std::uniform_int_distribution<Index>(0, labels)(rng);
      const SparsePotential f = random_sparse_potential(rng, labels, m);
      const Eigen::MatrixXd dense = f.densify();
      Eigen::VectorXd h(labels);
      for (Index k = 0; k < labels; ++k) h[k] = unit(rng);

      const Eigen::VectorXd fast = update_fast_sum<double>(h, f);
      const Eigen::VectorXd standard = update_standard_sum<double>(h, dense);
      CHECK(max_relative_deviation(fast, standard) <= 1e-9);
      // Independent route: Eigen's own matrix-vector product.
      const Eigen::VectorXd reference = dense.transpose() * h;
      CHECK(max_relative_deviation(standard, reference) <= 1e-12);

      Eigen::VectorXd lh(labels);
      for (Index k = 0; k < labels; ++k) lh[k] = log_h(rng);
      SparsePotential log_f = random_sparse_potential(rng, labels, m);
      CHECK(bitwise_equal(update_fast_max<double>(lh, log_f), update_standard_max<double>(lh, log_f.densify())));
    }
  }
}

TEST_CASE("operation counts") {
  std::mt19937_64 rng(99);
  for (Index labels : {Index{4}, Index{16}, Index{64}}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Index cap = std::uniform_int_distribution<Index>(0, labels)(rng);
      const SparsePotential f = random_sparse_potential(rng, labels, cap);
      const Index m = f.max_neighborhood();
      const Eigen::VectorXd h = Eigen::VectorXd::Constant(labels, 0.5);
      Eigen::VectorXd out(labels);

      OpCounter fast;
      update_fast_sum<double>(h, f, out, &fast);
      CHECK(fast.updates == 1);
      CHECK(fast.madds == static_cast<std::uint64_t>(labels) + f.nonzeros() + static_cast<std::uint64_t>(labels));
      CHECK(fast.madds <= static_cast<std::uint64_t>(4 * (m * labels + labels)));

      OpCounter standard;
      update_standard_sum<double>(h, f.densify(), out, &standard);
      CHECK(standard.madds == static_cast<std::uint64_t>(labels * labels));

      OpCounter fast_max;
      update_fast_max<double>(h, f, out, &fast_max);
      CHECK(fast_max.madds <= static_cast<std::uint64_t>(4 * (m * labels + labels)));
    }
  }
}

TEST_CASE("size mismatch is rejected") {
  const auto f = truncated_linear_potential(4, 1.0, 2.0);
  Eigen::VectorXd out(4);
  CHECK_THROWS_AS(update_fast_sum<double>(Eigen::Vector3d(1, 1, 1), f, out), InvalidModel);
}
