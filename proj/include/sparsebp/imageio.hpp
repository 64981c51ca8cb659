#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

#include "sparsebp/error.hpp"
#include "sparsebp/image.hpp"

namespace sparsebp {

enum class PgmMode { Binary, Ascii };

class PgmError : public Error {
 public:
  enum class Kind { BadMagic, BadHeader, ZeroDimension, MaxvalOutOfRange, TruncatedPayload, BadPixel };

  PgmError(Kind kind, std::size_t offset, const std::string& detail);
  Kind kind() const { return kind_; }
  /// Byte offset in the input where parsing failed.
  std::size_t offset() const { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

/// Parses P2 (ASCII) or P5 (binary) 8-bit PGM. Header comments are allowed;
/// samples are rescaled to 0..255 when maxval < 255.
GrayImage read_pgm(std::string_view bytes);
/// Canonical "P5\n<w> <h>\n255\n" header (or P2), then the payload. ASCII
/// payload puts one image row per line.
std::string write_pgm(const GrayImage& image, PgmMode mode = PgmMode::Binary);

GrayImage read_pgm_file(const std::filesystem::path& path);
void write_pgm_file(const std::filesystem::path& path, const GrayImage& image, PgmMode mode = PgmMode::Binary);

}  // namespace sparsebp
