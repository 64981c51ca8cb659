#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sparsebp/bench.hpp"

using namespace sparsebp;

TEST_CASE("log-log slope") {
  CHECK(loglog_slope({8, 16, 32, 64}, {3 * 64.0, 3 * 256.0, 3 * 1024.0, 3 * 4096.0}) == doctest::Approx(2.0));
  CHECK(loglog_slope({1, 10}, {5, 50}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(loglog_slope({1}, {1}), InvalidModel);
}

TEST_CASE("small benchmark run") {
  BenchConfig config;
  config.height = 8;
  config.width = 8;
  config.labels = {8, 16};
  config.truncations = {2.0};
  config.reps = 3;
  const auto rows = run_bench(config);
  REQUIRE(rows.size() == 4);
  for (const BenchRow& r : rows) {
    CHECK(r.sec_per_sweep > 0);
    CHECK(r.neighborhood == 3);
    CHECK(r.updates_per_sweep == 2 * 2 * 8 * 7);
    if (r.kernel == Kernel::Standard) CHECK(r.madds_per_sweep == r.updates_per_sweep * r.labels * r.labels);
    else CHECK(r.madds_per_sweep <= r.updates_per_sweep * 4 * (r.neighborhood * r.labels + r.labels));
  }
  const std::string table = format_bench_table(rows);
  CHECK(table.rfind("M m grid kernel sec_per_sweep madds speedup\n", 0) == 0);
  CHECK(table.find("8 3 8x8 standard ") != std::string::npos);
  std::istringstream kv(format_bench_keyvalue(rows));
  std::string line;
  int lines = 0;
  while (std::getline(kv, line)) {
    ++lines;
    CHECK(line.find("M=") == 0);
    CHECK(line.find(" speedup=") != std::string::npos);
  }
  CHECK(lines == 4);

  config.reps = 2;
  CHECK_THROWS_AS(run_bench(config), InvalidModel);
}
