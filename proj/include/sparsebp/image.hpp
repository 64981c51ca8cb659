#pragma once

#include <Eigen/Core>

#include <cstdint>

#include "sparsebp/error.hpp"

namespace sparsebp {

/// 8-bit grayscale image, row-major, pixel (row, col).
class GrayImage {
 public:
  using Pixels = Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  GrayImage() = default;
  GrayImage(Eigen::Index height, Eigen::Index width, std::uint8_t fill = 0) {
    if (height < 1 || width < 1) throw InvalidModel("image dimensions must be positive");
    pixels_ = Pixels::Constant(height, width, fill);
  }
  explicit GrayImage(Pixels pixels) : pixels_(std::move(pixels)) {
    if (pixels_.rows() < 1 || pixels_.cols() < 1) throw InvalidModel("image dimensions must be positive");
  }

  Eigen::Index height() const { return pixels_.rows(); }
  Eigen::Index width() const { return pixels_.cols(); }
  std::uint8_t operator()(Eigen::Index row, Eigen::Index col) const { return pixels_(row, col); }
  std::uint8_t& operator()(Eigen::Index row, Eigen::Index col) { return pixels_(row, col); }
  const Pixels& pixels() const { return pixels_; }
  Pixels& pixels() { return pixels_; }

  friend bool operator==(const GrayImage& a, const GrayImage& b) {
    return a.height() == b.height() && a.width() == b.width() && (a.pixels_ == b.pixels_).all();
  }

 private:
  Pixels pixels_;
};

}  // namespace sparsebp
