#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "sparsebp/bp.hpp"
#include "sparsebp/image.hpp"
#include "sparsebp/mrf.hpp"

namespace sparsebp {

/// Stereo MRF parameters. Disparities are 0 .. labels-1; the right image is the
/// reference and disparity x matches R(r, c) against L(r, c + x).
struct StereoParams {
  Index labels = 16;
  double alpha = 1.0;               // pairwise strength
  double pairwise_truncation = 2.0; // T_b
  double beta = 0.05;               // unary strength
  double unary_truncation = 20.0;   // T_u
  int sweeps = 10;

  /// Throws InvalidModel on a non-positive strength or truncation, or labels outside 1..width.
  void validate(Index width) const;
};

/// g(x) = exp(-beta * min(|R(r,c) - L(r,c+x)|, T_u)); hypotheses that leave
/// the frame (c + x >= width) get the full penalty exp(-beta * T_u).
Eigen::VectorXd stereo_unary(const GrayImage& left, const GrayImage& right, Index row, Index col,
                             const StereoParams& params);
/// The same costs in the log domain, -beta * min(...), without a round trip through exp.
Eigen::VectorXd stereo_log_unary(const GrayImage& left, const GrayImage& right, Index row, Index col,
                                 const StereoParams& params);

/// Grid MRF over the right image with one shared truncated linear potential.
MrfModel build_stereo_mrf(const GrayImage& left, const GrayImage& right, const StereoParams& params);

/// Intensity round(label * 255 / max(M - 1, 1)), row-major.
GrayImage disparity_to_image(const std::vector<Index>& labels, Index label_count, Index height, Index width);

struct StereoPair {
  GrayImage left;
  GrayImage right;
};

/// Random-dot pair with constant disparity: right is random, left(r, c + d) = right(r, c).
/// Intensities are drawn uniformly from `levels` evenly spaced gray values.
StereoPair random_dot_stereogram(Index height, Index width, Index disparity, std::uint64_t seed, int levels = 256);

/// Low-texture scene on which pruning the pairwise potential visibly changes
/// the result: two large piecewise-constant regions at different depths with
/// faint dot texture, a small unary strength and a disparity jump wider than T_b.
struct PruningFixture {
  StereoPair images;
  StereoParams params;
  std::vector<Index> true_disparity;  // row-major
};
PruningFixture pruning_pitfall_fixture(std::uint64_t seed = 7);

struct StereoResult {
  std::vector<Index> labels;
  GrayImage disparity;
};

StereoResult run_stereo(const GrayImage& left, const GrayImage& right, const StereoParams& params, Kernel kernel,
                        Domain domain, const SweepOptions& options = {});

/// Fraction of pixels labelled `disparity`, ignoring the rightmost `border` columns.
double disparity_accuracy(const std::vector<Index>& labels, Index height, Index width, Index disparity, Index border);

}  // namespace sparsebp
