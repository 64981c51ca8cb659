#include "sparsebp/imageio.hpp"

#include <cmath>
#include <fstream>
#include <iterator>

namespace sparsebp {

namespace {

const char* kind_name(PgmError::Kind kind) {
  switch (kind) {
    case PgmError::Kind::BadMagic: return "bad magic";
    case PgmError::Kind::BadHeader: return "bad header";
    case PgmError::Kind::ZeroDimension: return "zero dimension";
    case PgmError::Kind::MaxvalOutOfRange: return "maxval out of range";
    case PgmError::Kind::TruncatedPayload: return "truncated payload";
    case PgmError::Kind::BadPixel: return "bad pixel";
  }
  return "pgm error";
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

class Cursor {
 public:
  explicit Cursor(std::string_view bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }
  bool done() const { return pos_ >= bytes_.size(); }

  void skip_space_and_comments() {
    while (!done()) {
      if (is_space(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (!done() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  // Unsigned decimal; returns false without consuming when none is present.
  bool read_uint(long long& value) {
    if (done() || bytes_[pos_] < '0' || bytes_[pos_] > '9') return false;
    value = 0;
    while (!done() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > (1LL << 40)) return false;
      ++pos_;
    }
    return true;
  }

  unsigned char byte_at(std::size_t i) const { return static_cast<unsigned char>(bytes_[i]); }
  std::size_t size() const { return bytes_.size(); }
  void advance(std::size_t n = 1) { pos_ += n; }
  char peek() const { return bytes_[pos_]; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

long long header_field(Cursor& in, const char* what) {
  in.skip_space_and_comments();
  long long value = 0;
  const std::size_t at = in.offset();
  if (in.done()) throw PgmError(PgmError::Kind::BadHeader, at, std::string("missing ") + what);
  if (!in.read_uint(value)) throw PgmError(PgmError::Kind::BadHeader, at, std::string("expected ") + what);
  return value;
}

std::uint8_t rescale(long long v, long long maxval) {
  if (maxval == 255) return static_cast<std::uint8_t>(v);
  return static_cast<std::uint8_t>(std::lround(static_cast<double>(v) * 255.0 / static_cast<double>(maxval)));
}

}  // namespace

PgmError::PgmError(Kind kind, std::size_t offset, const std::string& detail)
    : Error(std::string("pgm: ") + kind_name(kind) + " at byte " + std::to_string(offset) + ": " + detail),
      kind_(kind),
      offset_(offset) {}

GrayImage read_pgm(std::string_view bytes) {
  Cursor in(bytes);
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
    throw PgmError(PgmError::Kind::BadMagic, 0, "expected P2 or P5");
  const bool binary = bytes[1] == '5';
  in.advance(2);

  const std::size_t width_at = in.offset();
  const long long width = header_field(in, "width");
  const long long height = header_field(in, "height");
  if (width == 0 || height == 0) throw PgmError(PgmError::Kind::ZeroDimension, width_at, "width and height must be positive");
  const std::size_t maxval_at = in.offset();
  const long long maxval = header_field(in, "maxval");
  if (maxval < 1 || maxval > 255)
    throw PgmError(PgmError::Kind::MaxvalOutOfRange, maxval_at, "maxval " + std::to_string(maxval) + " not in 1..255");

  // Exactly one whitespace byte separates the header from the payload.
  if (in.done() || !is_space(in.peek())) throw PgmError(PgmError::Kind::BadHeader, in.offset(), "missing whitespace after maxval");
  in.advance();

  GrayImage image(height, width);
  const auto count = static_cast<std::size_t>(width * height);
  std::uint8_t* out = image.pixels().data();
  if (binary) {
    const std::size_t start = in.offset();
    if (in.size() - start < count)
      throw PgmError(PgmError::Kind::TruncatedPayload, in.size(),
                     "expected " + std::to_string(count) + " bytes, found " + std::to_string(in.size() - start));
    for (std::size_t k = 0; k < count; ++k) {
      const long long v = in.byte_at(start + k);
      if (v > maxval) throw PgmError(PgmError::Kind::BadPixel, start + k, "sample exceeds maxval");
      out[k] = rescale(v, maxval);
    }
  } else {
    for (std::size_t k = 0; k < count; ++k) {
      in.skip_space_and_comments();
      const std::size_t at = in.offset();
      if (in.done())
        throw PgmError(PgmError::Kind::TruncatedPayload, at,
                       "expected " + std::to_string(count) + " samples, found " + std::to_string(k));
      long long v = 0;
      if (!in.read_uint(v)) throw PgmError(PgmError::Kind::BadPixel, at, "expected a decimal sample");
      if (v > maxval) throw PgmError(PgmError::Kind::BadPixel, at, "sample exceeds maxval");
      out[k] = rescale(v, maxval);
    }
  }
  return image;
}

std::string write_pgm(const GrayImage& image, PgmMode mode) {
  std::string out = (mode == PgmMode::Binary ? "P5\n" : "P2\n") + std::to_string(image.width()) + " " +
                    std::to_string(image.height()) + "\n255\n";
  const auto& px = image.pixels();
  if (mode == PgmMode::Binary) {
    out.append(reinterpret_cast<const char*>(px.data()), static_cast<std::size_t>(px.size()));
  } else {
    for (Eigen::Index r = 0; r < image.height(); ++r) {
      for (Eigen::Index c = 0; c < image.width(); ++c) {
        if (c > 0) out += ' ';
        out += std::to_string(px(r, c));
      }
      out += '\n';
    }
  }
  return out;
}

GrayImage read_pgm_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return read_pgm(bytes);
}

void write_pgm_file(const std::filesystem::path& path, const GrayImage& image, PgmMode mode) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  const std::string bytes = write_pgm(image, mode);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace sparsebp
