#include "sparsebp/stereo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>

namespace sparsebp {

void StereoParams::validate(Index width) const {
  if (labels < 1) throw InvalidModel("disparity count must be at least 1");
  if (labels > width) throw InvalidModel("disparity count " + std::to_string(labels) + " exceeds image width");
  if (!(alpha > 0) || !(beta > 0)) throw InvalidModel("alpha and beta must be positive");
  if (!(pairwise_truncation > 0) || !(unary_truncation > 0)) throw InvalidModel("truncations must be positive");
  if (sweeps < 0) throw InvalidModel("sweep count must be nonnegative");
}

namespace {

void check_pair(const GrayImage& left, const GrayImage& right) {
  if (left.height() != right.height() || left.width() != right.width())
    throw InvalidModel("left and right images differ in size");
}

// Truncated absolute intensity difference for every disparity hypothesis.
Eigen::VectorXd matching_cost(const GrayImage& left, const GrayImage& right, Index row, Index col,
                              const StereoParams& params) {
  check_pair(left, right);
  if (row < 0 || row >= right.height() || col < 0 || col >= right.width()) throw InvalidModel("pixel out of range");
  Eigen::VectorXd cost(params.labels);
  const int reference = right(row, col);
  for (Index x = 0; x < params.labels; ++x) {
    if (col + x >= left.width()) {
      cost[x] = params.unary_truncation;
    } else {
      const double diff = std::abs(reference - static_cast<int>(left(row, col + x)));
      cost[x] = std::min(diff, params.unary_truncation);
    }
  }
  return cost;
}

}  // namespace

Eigen::VectorXd stereo_unary(const GrayImage& left, const GrayImage& right, Index row, Index col,
                             const StereoParams& params) {
  return matching_cost(left, right, row, col, params).unaryExpr([&](double c) { return std::exp(-params.beta * c); });
}

Eigen::VectorXd stereo_log_unary(const GrayImage& left, const GrayImage& right, Index row, Index col,
                                 const StereoParams& params) {
  // 0 - E keeps a perfect match at +0.0.
  return (0.0 - params.beta * matching_cost(left, right, row, col, params).array()).matrix();
}

MrfModel build_stereo_mrf(const GrayImage& left, const GrayImage& right, const StereoParams& params) {
  check_pair(left, right);
  params.validate(right.width());
  auto pairwise = PairwisePotential::truncated_linear(params.labels, params.alpha, params.pairwise_truncation);
  return build_grid_mrf(
      right.height(), right.width(), params.labels,
      [&](Index r, Index c) { return stereo_unary(left, right, r, c, params); }, pairwise,
      [&](Index r, Index c) { return stereo_log_unary(left, right, r, c, params); });
}

GrayImage disparity_to_image(const std::vector<Index>& labels, Index label_count, Index height, Index width) {
  if (static_cast<Index>(labels.size()) != height * width) throw InvalidModel("label count does not match image size");
  GrayImage image(height, width);
  const double scale = 255.0 / static_cast<double>(std::max<Index>(label_count - 1, 1));
  std::uint8_t* px = image.pixels().data();
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k] < 0 || labels[k] >= label_count)
      throw InvalidModel("label " + std::to_string(labels[k]) + " outside 0.." + std::to_string(label_count - 1));
    px[k] = static_cast<std::uint8_t>(std::lround(static_cast<double>(labels[k]) * scale));
  }
  return image;
}

StereoPair random_dot_stereogram(Index height, Index width, Index disparity, std::uint64_t seed, int levels) {
  if (disparity < 0 || disparity >= width) throw InvalidModel("disparity must lie in 0..width-1");
  if (levels < 2 || levels > 256) throw InvalidModel("levels must lie in 2..256");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> level(0, levels - 1);
  auto draw = [&] { return static_cast<std::uint8_t>(std::lround(level(rng) * 255.0 / (levels - 1))); };

  StereoPair pair{GrayImage(height, width), GrayImage(height, width)};
  for (Index r = 0; r < height; ++r)
    for (Index c = 0; c < width; ++c) pair.right(r, c) = draw();
  for (Index r = 0; r < height; ++r)
    for (Index c = 0; c < width; ++c) pair.left(r, c) = c >= disparity ? pair.right(r, c - disparity) : draw();
  return pair;
}

PruningFixture pruning_pitfall_fixture(std::uint64_t seed) {
  constexpr Index height = 32;
  constexpr Index width = 48;
  constexpr Index near_disparity = 9;
  constexpr Index far_disparity = 1;
  std::mt19937_64 rng(seed);
  // Faint texture: six gray levels four units apart.
  std::uniform_int_distribution<int> faint(0, 5);
  auto draw = [&] { return static_cast<std::uint8_t>(120 + 4 * faint(rng)); };

  PruningFixture fixture{{GrayImage(height, width), GrayImage(height, width)}, StereoParams{}, {}};
  auto& [left, right] = fixture.images;
  for (Index r = 0; r < height; ++r)
    for (Index c = 0; c < width; ++c) left(r, c) = draw();
  // A near square floating over a far background; the disparity jump exceeds T_b.
  for (Index r = 0; r < height; ++r)
    for (Index c = 0; c < width; ++c) {
      const bool near = r >= 8 && r < 24 && c >= 12 && c < 28;
      const Index d = near ? near_disparity : far_disparity;
      right(r, c) = c + d < width ? left(r, c + d) : draw();
      fixture.true_disparity.push_back(d);
    }
  fixture.params.labels = 16;
  fixture.params.alpha = 1.0;
  fixture.params.pairwise_truncation = 2.0;
  fixture.params.beta = 0.02;
  fixture.params.unary_truncation = 20.0;
  fixture.params.sweeps = 10;
  return fixture;
}

StereoResult run_stereo(const GrayImage& left, const GrayImage& right, const StereoParams& params, Kernel kernel,
                        Domain domain, const SweepOptions& options) {
  const MrfModel model = build_stereo_mrf(left, right, params);
  const MessageStore messages = run_sweeps(model, SweepSchedule::grid(model), params.sweeps, kernel, domain, options);
  StereoResult result;
  result.labels = decode_labels(model, messages);
  result.disparity = disparity_to_image(result.labels, params.labels, right.height(), right.width());
  return result;
}

double disparity_accuracy(const std::vector<Index>& labels, Index height, Index width, Index disparity, Index border) {
  if (static_cast<Index>(labels.size()) != height * width) throw InvalidModel("label count does not match image size");
  Index hits = 0;
  Index total = 0;
  for (Index r = 0; r < height; ++r)
    for (Index c = 0; c + border < width; ++c) {
      ++total;
      if (labels[static_cast<std::size_t>(r * width + c)] == disparity) ++hits;
    }
  return total == 0 ? 1.0 : static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace sparsebp
