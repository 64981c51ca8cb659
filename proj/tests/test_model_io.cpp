#include <doctest.h>

#include <random>

#include "sparsebp/bp.hpp"
#include "sparsebp/model_io.hpp"
#include "sparsebp/oracle.hpp"
#include "sparsebp/verify.hpp"

using namespace sparsebp;

TEST_CASE("chain fixture parses and verifies") {
  const MrfModel chain = read_model_file(SPARSEBP_TEST_DATA "/chain2.mrf");
  CHECK(chain.labels() == 2);
  CHECK(chain.node_count() == 2);
  CHECK(chain.edge_count() == 1);
  CHECK(chain.edges()[0].potential->dense(Domain::SumProduct)(0, 1) == 0.5);
  CHECK(chain.unary()(0, 1) == 2.0);

  VerifyOptions options;
  options.oracle = true;
  options.sweeps = 1;
  const VerifyReport report = verify_model(chain, options);
  CHECK(report.passed());
  CHECK(report.oracle_checked);
  CHECK(report.oracle_belief_rel_dev < 1e-12);
  const auto b = compute_beliefs(chain, run_sweeps(chain, SweepSchedule::for_model(chain), 1, Kernel::Fast, Domain::SumProduct));
  CHECK(b.beliefs(0, 0) == doctest::Approx(5.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("format then parse is lossless") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const MrfModel model = trial % 2 ? random_tree_instance(rng, 8, 6) : random_grid_instance(rng, 4, 8);
    const MrfModel back = parse_model(format_model(model));
    REQUIRE(back.edge_count() == model.edge_count());
    CHECK((back.unary().array() == model.unary().array()).all());
    for (Index e = 0; e < model.edge_count(); ++e) {
      const auto& a = model.edges()[static_cast<std::size_t>(e)];
      const auto& b = back.edges()[static_cast<std::size_t>(e)];
      CHECK(a.first == b.first);
      CHECK(a.second == b.second);
      CHECK((a.potential->dense(Domain::SumProduct).array() == b.potential->dense(Domain::SumProduct).array()).all());
    }
    CHECK(format_model(back) == format_model(model));
  }
}

TEST_CASE("shared potentials are written once") {
  auto f = PairwisePotential::truncated_linear(3, 1.0, 2.0);
  const MrfModel grid = build_grid_mrf(2, 3, 3, [](Index, Index) { return Eigen::Vector3d(1, 2, 3); }, f);
  const std::string text = format_model(grid);
  CHECK(text.find("pot 0 ") != std::string::npos);
  CHECK(text.find("pot 1 ") == std::string::npos);
  const MrfModel back = parse_model(text);
  CHECK(back.edges()[0].potential == back.edges()[5].potential);
}

TEST_CASE("malformed models") {
  CHECK_THROWS_AS(parse_model(""), InvalidModel);
  CHECK_THROWS_AS(parse_model("g 0 1 1\n"), InvalidModel);
  CHECK_THROWS_AS(parse_model("MRF M=2 nodes=1 edges=0\ng 0 1\n"), InvalidModel);
  CHECK_THROWS_AS(parse_model("MRF M=2 nodes=2 edges=0\ng 0 1 1\n"), InvalidModel);
  CHECK_THROWS_AS(parse_model("MRF M=2 nodes=2 edges=1\ng 0 1 1\ng 1 1 1\ne 0 1 4\n"), InvalidModel);
  CHECK_THROWS_AS(parse_model("MRF M=2 nodes=1 edges=0\ng 0 1 x\n"), InvalidModel);
  CHECK_THROWS_AS(parse_model("MRF M=2 nodes=2 edges=1\ng 0 1 1\ng 1 1 1\ne 0 1 0\npot 0 fbar=0.5\ncol 0 1:1 0:1\n"),
                  InvalidModel);
  CHECK_THROWS_AS(parse_model("MRF M=2 nodes=1 edges=0\ng 0 1 1\nbogus\n"), InvalidModel);
  try {
    parse_model("MRF M=2 nodes=1 edges=0\n\ng 0 1 nope\n");
  } catch (const InvalidModel& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}
