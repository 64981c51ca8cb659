#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sparsebp/image.hpp"
#include "sparsebp/kernels.hpp"

namespace sparsebp {

struct BenchConfig {
  Index height = 64;
  Index width = 64;
  std::vector<Index> labels{16, 64};
  std::vector<double> truncations{2.0};
  double alpha = 1.0;
  int sweeps = 1;
  int reps = 3;
  std::uint64_t seed = 1;
  /// When set, unaries come from this stereo pair instead of random draws.
  std::optional<GrayImage> left;
  std::optional<GrayImage> right;
};

struct BenchRow {
  Index labels = 0;
  Index neighborhood = 0;  // m
  Index height = 0;
  Index width = 0;
  Kernel kernel = Kernel::Standard;
  Domain domain = Domain::SumProduct;
  double sec_per_sweep = 0;  // minimum over reps
  std::uint64_t madds_per_sweep = 0;
  std::uint64_t updates_per_sweep = 0;
  double speedup = 0;  // standard / fast for this (M, T)
};

/// Times standard and fast sum-product sweeps for every (M, T) pair.
std::vector<BenchRow> run_bench(const BenchConfig& config);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Whitespace table with header `M m grid kernel sec_per_sweep madds speedup`.
std::string format_bench_table(const std::vector<BenchRow>& rows);
/// One `key=value ...` line per row.
std::string format_bench_keyvalue(const std::vector<BenchRow>& rows);

std::string to_string(Kernel kernel);
std::string to_string(Domain domain);

}  // namespace sparsebp
