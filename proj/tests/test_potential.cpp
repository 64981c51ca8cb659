#include <doctest.h>

#include <cmath>
#include <random>

#include "sparsebp/potential.hpp"

using namespace sparsebp;

namespace {

Eigen::MatrixXd three_by_three() {
  Eigen::MatrixXd f(3, 3);
  f << 1, .5, .1,
       .5, 1, .5,
       .1, .5, 1;
  return f;
}

}  // namespace

TEST_CASE("truncated linear entries") {
  const auto f = truncated_linear_potential(5, 1.0, 2.0);
  CHECK(f(0, 0) == 1.0);
  CHECK(f(0, 1) == doctest::Approx(0.36788).epsilon(1e-5));
  CHECK(f(0, 1) == std::exp(-1.0));
  CHECK(f.fbar() == std::exp(-2.0));
  CHECK(f(4, 0) == f.fbar());
  CHECK(f.fbar() == doctest::Approx(0.13534).epsilon(1e-4));

  const auto rows = f.neighbors(0);
  CHECK(std::find(rows.begin(), rows.end(), 4) == rows.end());
  CHECK(rows.size() == 2);  // states 0 and 1
  CHECK(f.maxsum_safe());
}

TEST_CASE("truncated linear rejects bad parameters") {
  CHECK_THROWS_AS(truncated_linear_potential(5, 0.0, 2.0), InvalidModel);
  CHECK_THROWS_AS(truncated_linear_potential(5, -1.0, 2.0), InvalidModel);
  CHECK_THROWS_AS(truncated_linear_potential(5, 1.0, 0.0), InvalidModel);
  CHECK_THROWS_AS(truncated_linear_potential(0, 1.0, 2.0), InvalidModel);
}

TEST_CASE("truncated linear properties") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> alpha_dist(0.1, 3.0), t_dist(0.3, 6.0);
  std::uniform_int_distribution<Index> m_dist(1, 40);
  for (int trial = 0; trial < 200; ++trial) {
    const Index labels = m_dist(rng);
    const double alpha = alpha_dist(rng);
    const double t = t_dist(rng);
    const auto f = truncated_linear_potential(labels, alpha, t);
    const Eigen::MatrixXd dense = f.densify();

    // Symmetric, and matches the closed form everywhere.
    CHECK((dense - dense.transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (Index i = 0; i < labels; ++i)
      for (Index j = 0; j < labels; ++j)
        CHECK(dense(i, j) == doctest::Approx(std::exp(-alpha * std::min<double>(std::abs(i - j), t))).epsilon(1e-14));

    for (Index j = 0; j < labels; ++j)
      for (double v : f.values(j)) CHECK(v > f.fbar());

    // Interior columns hold 2*ceil(T) - 1 states, capped at M.
    const Index expected = std::min<Index>(labels, 2 * static_cast<Index>(std::ceil(t)) - 1);
    const Index centre = labels / 2;
    if (centre - static_cast<Index>(std::ceil(t)) >= 0 && centre + static_cast<Index>(std::ceil(t)) < labels)
      CHECK(static_cast<Index>(f.neighbors(centre).size()) == expected);
    CHECK(f.max_neighborhood() <= labels);
  }
}

TEST_CASE("log-domain truncated linear") {
  const auto f = truncated_linear_log_potential(6, 0.5, 3.0);
  CHECK(f.fbar() == -1.5);
  CHECK(f(2, 2) == 0.0);
  CHECK(!std::signbit(f(2, 2)));
  CHECK(f(2, 4) == -1.0);
  CHECK(f(0, 5) == -1.5);
  CHECK(f.maxsum_safe());
  // Large alpha*T stays finite.
  CHECK(truncated_linear_log_potential(4, 500.0, 3.0).fbar() == -1500.0);
}

TEST_CASE("sparse_from_dense examples") {
  const auto f = sparse_from_dense(three_by_three(), 0.1, 0.0);
  CHECK(f.max_neighborhood() == 3);
  auto check_column = [&](Index xj, std::vector<Index> rows, std::vector<double> vals) {
    auto r = f.neighbors(xj);
    auto v = f.values(xj);
    REQUIRE(r.size() == rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
      CHECK(r[k] == rows[k]);
      CHECK(v[k] == vals[k]);
      CHECK(f.residuals(xj)[k] == vals[k] - 0.1);
    }
  };
  check_column(0, {0, 1}, {1, .5});
  check_column(1, {0, 1, 2}, {.5, 1, .5});
  check_column(2, {1, 2}, {.5, 1});

  const auto constant = sparse_from_dense(Eigen::MatrixXd::Constant(4, 4, 0.7), 0.7, 0.0);
  CHECK(constant.max_neighborhood() == 0);
  CHECK(constant.nonzeros() == 0);

  Eigen::MatrixXd sparse_matrix = Eigen::MatrixXd::Zero(4, 4);
  sparse_matrix(1, 2) = 3;
  sparse_matrix(3, 0) = 0.25;
  const auto zero_fbar = sparse_from_dense(sparse_matrix, 0.0, 0.0);
  CHECK(zero_fbar.nonzeros() == 2);
  CHECK(zero_fbar(1, 2) == 3);
  CHECK(zero_fbar(3, 0) == 0.25);
}

TEST_CASE("sparse_from_dense with a relative tolerance") {
  Eigen::MatrixXd f = Eigen::MatrixXd::Constant(3, 3, 1e-6);
  f(0, 0) = 1e-6 * (1 + 1e-12);
  f(1, 1) = 2.0;
  // tol * max(|fbar|, 1): the tiny perturbation folds into fbar, 2.0 does not.
  const auto s = sparse_from_dense(f, 1e-6, 1e-9);
  CHECK(s.nonzeros() == 1);
  CHECK(s(1, 1) == 2.0);
  CHECK((s.densify() - f).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK_THROWS_AS(sparse_from_dense(f, 1e-6, -1.0), InvalidModel);
}

TEST_CASE("densify(sparse_from_dense(D)) reproduces D") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<Index> size(1, 12);
  std::bernoulli_distribution keep_fbar(0.7);
  std::uniform_real_distribution<double> value(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Index labels = size(rng);
    const double fbar = value(rng);
    Eigen::MatrixXd dense(labels, labels);
    for (Index j = 0; j < labels; ++j)
      for (Index i = 0; i < labels; ++i) dense(i, j) = keep_fbar(rng) ? fbar : value(rng);
    const auto s = sparse_from_dense(dense, fbar, 0.0);
    CHECK((s.densify().array() == dense.array()).all());
    CHECK((s.transposed().densify().array() == dense.transpose().array()).all());
  }
}

TEST_CASE("constructor invariants") {
  using E = SparsePotential::Entry;
  CHECK_THROWS_AS(SparsePotential(2, 0.1, {{{1, .5}, {0, .5}}, {}}), InvalidModel);  // not increasing
  CHECK_THROWS_AS(SparsePotential(2, 0.1, {{{0, .5}, {0, .5}}, {}}), InvalidModel);  // duplicate
  CHECK_THROWS_AS(SparsePotential(2, 0.1, {{E{2, .5}}, {}}), InvalidModel);          // out of range
  CHECK_THROWS_AS(SparsePotential(2, 0.1, {{}}), InvalidModel);                       // missing column
  const SparsePotential below(2, 0.5, {{E{0, 0.2}}, {}});
  CHECK_FALSE(below.maxsum_safe());
  CHECK(below.residuals(0)[0] == 0.2 - 0.5);
}
