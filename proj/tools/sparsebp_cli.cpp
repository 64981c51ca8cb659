// sparsebp command-line front end: stereo inference, fast/standard
// verification, the scaling benchmark and a random-dot pair generator.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sparsebp/bench.hpp"
#include "sparsebp/imageio.hpp"
#include "sparsebp/model_io.hpp"
#include "sparsebp/stereo.hpp"
#include "sparsebp/verify.hpp"

using namespace sparsebp;

namespace {

const std::map<std::string, Kernel> kKernels{
    {"standard", Kernel::Standard}, {"fast", Kernel::Fast}, {"pruned", Kernel::Pruned}};
const std::map<std::string, Domain> kDomains{{"sum", Domain::SumProduct}, {"max", Domain::MaxSum}};

void add_stereo_params(CLI::App* cmd, StereoParams& params) {
  cmd->add_option("--labels,-M", params.labels, "Disparity count")->capture_default_str();
  cmd->add_option("--alpha", params.alpha, "Pairwise strength")->capture_default_str();
  cmd->add_option("--tb", params.pairwise_truncation, "Pairwise truncation T_b")->capture_default_str();
  cmd->add_option("--beta", params.beta, "Unary strength")->capture_default_str();
  cmd->add_option("--tu", params.unary_truncation, "Unary truncation T_u")->capture_default_str();
  cmd->add_option("--sweeps", params.sweeps, "Number of sweeps")->capture_default_str();
}

int cmd_stereo(const std::string& left_path, const std::string& right_path, const std::string& out_path,
               const StereoParams& params, Kernel kernel, Domain domain, int threads, bool ascii) {
  const GrayImage left = read_pgm_file(left_path);
  const GrayImage right = read_pgm_file(right_path);
  SweepOptions options;
  options.threads = threads;
  options.on_sweep = [](int sweep, double seconds) { std::printf("sweep %d %.9g\n", sweep, seconds); };
  const StereoResult result = run_stereo(left, right, params, kernel, domain, options);
  write_pgm_file(out_path, result.disparity, ascii ? PgmMode::Ascii : PgmMode::Binary);
  return 0;
}

struct VerifyArgs {
  std::string model_path;
  int random = 0;
  std::uint64_t seed = 1;
  std::string topology = "grid";
  Index max_side = 8;
  Index max_labels = 32;
  std::string fixture;
  VerifyOptions options;
};

int cmd_verify(VerifyArgs args, bool sweeps_given) {
  int failures = 0;
  int total = 0;
  auto report = [&](const std::string& name, const MrfModel& model, VerifyOptions options) {
    if (options.oracle && model.is_tree() && !sweeps_given) options.sweeps = std::max<int>(1, static_cast<int>(tree_diameter(model)));
    const VerifyReport r = verify_model(model, options);
    ++total;
    if (!r.passed()) ++failures;
    std::cout << "== " << name << "\n" << r.format();
  };

  if (!args.fixture.empty()) {
    if (args.fixture != "pruning") throw Error("unknown fixture '" + args.fixture + "'");
    const PruningFixture fx = pruning_pitfall_fixture(args.seed);
    VerifyOptions options = args.options;
    options.pruned = true;
    if (!sweeps_given) options.sweeps = fx.params.sweeps;
    report("pruning fixture", build_stereo_mrf(fx.images.left, fx.images.right, fx.params), options);
  }
  if (!args.model_path.empty()) report(args.model_path, read_model_file(args.model_path), args.options);
  for (int k = 0; k < args.random; ++k) {
    const std::uint64_t seed = args.seed + static_cast<std::uint64_t>(k);
    std::mt19937_64 rng(seed);
    const MrfModel model = args.topology == "tree" ? random_tree_instance(rng, 8, std::min<Index>(args.max_labels, 5))
                                                   : random_grid_instance(rng, args.max_side, args.max_labels);
    report("random seed " + std::to_string(seed), model, args.options);
  }
  if (total == 0) throw Error("nothing to verify: give a model file, --random or --fixture");
  std::cout << "passed " << (total - failures) << "/" << total << "\n";
  return failures == 0 ? 0 : 1;
}

struct BenchArgs {
  std::string grid = "64x64";
  std::vector<Index> labels{16, 64};
  std::vector<double> truncations{2.0};
  std::string out;
  std::string left;
  std::string right;
  BenchConfig config;
};

int cmd_bench(BenchArgs args) {
  const auto x = args.grid.find('x');
  if (x == std::string::npos) throw Error("--grid expects HxW");
  args.config.height = std::stol(args.grid.substr(0, x));
  args.config.width = std::stol(args.grid.substr(x + 1));
  args.config.labels = args.labels;
  args.config.truncations = args.truncations;
  if (!args.left.empty() || !args.right.empty()) {
    if (args.left.empty() || args.right.empty()) throw Error("--left and --right go together");
    args.config.left = read_pgm_file(args.left);
    args.config.right = read_pgm_file(args.right);
  }
  const auto rows = run_bench(args.config);
  std::cout << format_bench_table(rows);
  if (!args.out.empty()) {
    std::ofstream out(args.out);
    if (!out) throw Error("cannot write " + args.out);
    out << format_bench_keyvalue(rows);
  }
  return 0;
}

struct SynthArgs {
  Index height = 48;
  Index width = 64;
  Index disparity = 3;
  std::uint64_t seed = 1;
  int levels = 256;
  std::string fixture;
  std::string left;
  std::string right;
};

int cmd_synth(const SynthArgs& args) {
  StereoPair pair = args.fixture == "pruning" ? pruning_pitfall_fixture(args.seed).images
                                              : random_dot_stereogram(args.height, args.width, args.disparity, args.seed, args.levels);
  if (!args.fixture.empty() && args.fixture != "pruning") throw Error("unknown fixture '" + args.fixture + "'");
  write_pgm_file(args.left, pair.left);
  write_pgm_file(args.right, pair.right);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact sparse-compatibility belief propagation for pairwise MRFs"};
  app.require_subcommand(1);

  // stereo
  auto* stereo = app.add_subcommand("stereo", "Estimate a disparity map from a rectified PGM pair");
  std::string left, right, out;
  StereoParams params;
  Kernel kernel = Kernel::Fast;
  Domain domain = Domain::SumProduct;
  int threads = 1;
  bool ascii = false;
  stereo->add_option("left", left, "Left image (PGM)")->required()->check(CLI::ExistingFile);
  stereo->add_option("right", right, "Right image (PGM), the reference view")->required()->check(CLI::ExistingFile);
  stereo->add_option("--out,-o", out, "Output disparity image (PGM)")->required();
  add_stereo_params(stereo, params);
  stereo->add_option("--kernel", kernel, "standard | fast | pruned")->transform(CLI::CheckedTransformer(kKernels, CLI::ignore_case));
  stereo->add_option("--domain", domain, "sum | max")->transform(CLI::CheckedTransformer(kDomains, CLI::ignore_case));
  stereo->add_option("--threads", threads, "Workers for row/column-parallel passes")->capture_default_str();
  stereo->add_flag("--ascii", ascii, "Write P2 instead of P5");

  // verify
  auto* verify = app.add_subcommand("verify", "Compare fast and standard BP (and optionally exact inference)");
  VerifyArgs vargs;
  verify->add_option("model", vargs.model_path, "Model file in the plain-text MRF format")->check(CLI::ExistingFile);
  verify->add_option("--random", vargs.random, "Number of random instances");
  verify->add_option("--seed", vargs.seed, "First random seed")->capture_default_str();
  verify->add_option("--topology", vargs.topology, "Random instance topology: grid | tree")
      ->check(CLI::IsMember({"grid", "tree"}))
      ->capture_default_str();
  verify->add_option("--max-side", vargs.max_side, "Largest random grid side")->capture_default_str();
  verify->add_option("--max-labels", vargs.max_labels, "Largest random label count")->capture_default_str();
  auto* sweeps_opt = verify->add_option("--sweeps", vargs.options.sweeps, "Sweeps per run (trees with --oracle default to the diameter)");
  verify->add_flag("--oracle", vargs.options.oracle, "Check tree models against exact enumeration");
  verify->add_flag("--pruned", vargs.options.pruned, "Also report pruned-vs-fast label divergence");
  verify->add_option("--fixture", vargs.fixture, "Built-in fixture: pruning");

  // bench
  auto* bench = app.add_subcommand("bench", "Time standard vs fast sum-product sweeps");
  BenchArgs bargs;
  bench->add_option("--grid", bargs.grid, "Grid size HxW")->capture_default_str();
  bench->add_option("--M", bargs.labels, "Label counts")->delimiter(',');
  bench->add_option("--T", bargs.truncations, "Pairwise truncations")->delimiter(',');
  bench->add_option("--alpha", bargs.config.alpha, "Pairwise strength")->capture_default_str();
  bench->add_option("--sweeps", bargs.config.sweeps, "Sweeps per repetition")->capture_default_str();
  bench->add_option("--reps", bargs.config.reps, "Repetitions (minimum is reported)")->check(CLI::Range(3, 1000))->capture_default_str();
  bench->add_option("--seed", bargs.config.seed, "Seed for random unaries")->capture_default_str();
  bench->add_option("--out", bargs.out, "Write key=value report here");
  bench->add_option("--left", bargs.left, "Use this stereo pair instead of random unaries")->check(CLI::ExistingFile);
  bench->add_option("--right", bargs.right)->check(CLI::ExistingFile);

  // synth
  auto* synth = app.add_subcommand("synth", "Write a random-dot stereo pair");
  SynthArgs sargs;
  synth->add_option("--height", sargs.height)->capture_default_str();
  synth->add_option("--width", sargs.width)->capture_default_str();
  synth->add_option("--disparity", sargs.disparity)->capture_default_str();
  synth->add_option("--seed", sargs.seed)->capture_default_str();
  synth->add_option("--levels", sargs.levels, "Gray levels in the dot pattern")->capture_default_str();
  synth->add_option("--fixture", sargs.fixture, "Built-in pair instead: pruning");
  synth->add_option("--left", sargs.left)->required();
  synth->add_option("--right", sargs.right)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (stereo->parsed()) return cmd_stereo(left, right, out, params, kernel, domain, threads, ascii);
    if (verify->parsed()) return cmd_verify(vargs, sweeps_opt->count() > 0);
    if (bench->parsed()) return cmd_bench(bargs);
    if (synth->parsed()) return cmd_synth(sargs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
