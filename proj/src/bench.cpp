#include "sparsebp/bench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "sparsebp/bp.hpp"
#include "sparsebp/stereo.hpp"

namespace sparsebp {

std::string to_string(Kernel kernel) {
  switch (kernel) {
    case Kernel::Standard: return "standard";
    case Kernel::Fast: return "fast";
    case Kernel::Pruned: return "pruned";
  }
  return "?";
}

std::string to_string(Domain domain) { return domain == Domain::SumProduct ? "sum" : "max"; }

namespace {

MrfModel bench_model(const BenchConfig& config, Index labels, double truncation) {
  if (config.left && config.right) {
    StereoParams params;
    params.labels = labels;
    params.alpha = config.alpha;
    params.pairwise_truncation = truncation;
    return build_stereo_mrf(*config.left, *config.right, params);
  }
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> dist(0.05, 1.0);
  auto pairwise = PairwisePotential::truncated_linear(labels, config.alpha, truncation);
  return build_grid_mrf(
      config.height, config.width, labels,
      [&](Index, Index) {
        Eigen::VectorXd g(labels);
        for (Index k = 0; k < labels; ++k) g[k] = dist(rng);
        return g;
      },
      pairwise);
}

BenchRow empty_row(const MrfModel& model, Kernel kernel) {
  BenchRow row;
  row.labels = model.labels();
  row.neighborhood = model.max_neighborhood();
  row.height = model.grid()->height;
  row.width = model.grid()->width;
  row.kernel = kernel;
  row.domain = Domain::SumProduct;
  row.sec_per_sweep = std::numeric_limits<double>::infinity();
  return row;
}

void time_once(const MrfModel& model, const SweepSchedule& schedule, const BenchConfig& config, BenchRow& row) {
  OpCounter counter;
  double total = 0;
  SweepOptions options;
  options.counter = &counter;
  options.on_sweep = [&](int, double seconds) { total += seconds; };
  run_sweeps(model, schedule, config.sweeps, row.kernel, Domain::SumProduct, options);
  row.sec_per_sweep = std::min(row.sec_per_sweep, total / config.sweeps);
  row.madds_per_sweep = counter.madds / static_cast<std::uint64_t>(config.sweeps);
  row.updates_per_sweep = counter.updates / static_cast<std::uint64_t>(config.sweeps);
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchConfig& config) {
  if (config.reps < 3) throw InvalidModel("benchmark needs at least 3 repetitions");
  if (config.sweeps < 1) throw InvalidModel("benchmark needs at least one sweep");
  std::vector<BenchRow> rows;
  for (const Index labels : config.labels)
    for (const double truncation : config.truncations) {
      const MrfModel model = bench_model(config, labels, truncation);
      const SweepSchedule schedule = SweepSchedule::grid(model);
      BenchRow standard = empty_row(model, Kernel::Standard);
      BenchRow fast = empty_row(model, Kernel::Fast);
      // Alternating repetitions expose both kernels to the same machine load.
      for (int rep = 0; rep < config.reps; ++rep) {
        time_once(model, schedule, config, standard);
        time_once(model, schedule, config, fast);
      }
      const double speedup = standard.sec_per_sweep / fast.sec_per_sweep;
      standard.speedup = speedup;
      fast.speedup = speedup;
      rows.push_back(standard);
      rows.push_back(fast);
    }
  return rows;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidModel("slope needs at least two matching points");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double lx = std::log(x[k]);
    const double ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string format_bench_table(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "M m grid kernel sec_per_sweep madds speedup\n";
  for (const BenchRow& r : rows)
    out << r.labels << ' ' << r.neighborhood << ' ' << r.height << 'x' << r.width << ' ' << to_string(r.kernel) << ' '
        << r.sec_per_sweep << ' ' << r.madds_per_sweep << ' ' << r.speedup << "\n";
  return out.str();
}

std::string format_bench_keyvalue(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out.precision(9);
  for (const BenchRow& r : rows)
    out << "M=" << r.labels << " m=" << r.neighborhood << " grid=" << r.height << 'x' << r.width
        << " kernel=" << to_string(r.kernel) << " domain=" << to_string(r.domain) << " sec_per_sweep=" << r.sec_per_sweep
        << " madds=" << r.madds_per_sweep << " updates=" << r.updates_per_sweep << " speedup=" << r.speedup << "\n";
  return out.str();
}

}  // namespace sparsebp
