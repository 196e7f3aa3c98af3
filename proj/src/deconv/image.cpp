#include "ebprior/deconv/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include <fmt/format.h>

#include "ebprior/core/csv.hpp"
#include "ebprior/error.hpp"

namespace ebprior::deconv {

Image::Image(std::size_t width, std::size_t height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width == 0 || height == 0) throw ValidationError("image: width and height must be >= 1");
  if (pixels_.size() != width * height) {
    throw ValidationError(fmt::format("image: expected {} pixels, got {}", width * height, pixels_.size()));
  }
  for (double v : pixels_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("image: pixels must be finite and >= 0");
  }
}

Image Image::uniform(std::size_t width, std::size_t height) {
  return Image(width, height, std::vector<double>(width * height, 1.0 / static_cast<double>(width * height)));
}

double Image::total() const {
  double s = 0.0;
  for (double v : pixels_) s += v;
  return s;
}

bool Image::is_normalized() const { return std::abs(total() - 1.0) <= 1e-9; }

Image Image::normalized() const {
  const double s = total();
  if (!(s > 0.0)) throw ValidationError("image: cannot normalize an all-zero image");
  std::vector<double> p(pixels_);
  for (double& v : p) v /= s;
  return Image(width_, height_, std::move(p));
}

double l1_distance(const Image& a, const Image& b) {
  if (a.width() != b.width() || a.height() != b.height()) throw ValidationError("image: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a.pixels()[i] - b.pixels()[i]);
  return s;
}

namespace {

// Reads the next header integer, skipping whitespace and '#' comments.
long header_value(const std::string& bytes, std::size_t& pos, const std::string& source) {
  for (;;) {
    while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (pos < bytes.size() && bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  const std::size_t start = pos;
  while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) ++pos;
  if (start == pos) throw ValidationError(fmt::format("{}: malformed PGM header", source));
  return std::stol(bytes.substr(start, pos - start));
}

}  // namespace

Image parse_pgm(const std::string& bytes, const std::string& source) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
    throw ValidationError(fmt::format("{}: not a P2/P5 PGM file", source));
  }
  const bool binary = bytes[1] == '5';
  std::size_t pos = 2;
  const long w = header_value(bytes, pos, source);
  const long h = header_value(bytes, pos, source);
  const long maxval = header_value(bytes, pos, source);
  if (w <= 0 || h <= 0) throw ValidationError(fmt::format("{}: PGM width and height must be positive", source));
  if (maxval <= 0 || maxval > 65535) throw ValidationError(fmt::format("{}: PGM maxval must lie in [1, 65535]", source));
  const auto n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  std::vector<double> px(n);
  if (binary) {
    ++pos;  // single whitespace byte after maxval
    const std::size_t bpp = maxval < 256 ? 1 : 2;
    if (bytes.size() < pos + n * bpp) throw ValidationError(fmt::format("{}: truncated PGM data", source));
    for (std::size_t i = 0; i < n; ++i) {
      const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + pos + i * bpp);
      px[i] = bpp == 1 ? p[0] : static_cast<double>((p[0] << 8) | p[1]);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) px[i] = static_cast<double>(header_value(bytes, pos, source));
  }
  for (double v : px) {
    if (v > static_cast<double>(maxval)) throw ValidationError(fmt::format("{}: pixel value exceeds maxval", source));
  }
  const Image img(static_cast<std::size_t>(w), static_cast<std::size_t>(h), std::move(px));
  if (!(img.total() > 0.0)) throw ValidationError(fmt::format("{}: image is all zero", source));
  return img.normalized();
}

Image read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(fmt::format("cannot open image '{}'", path.string()));
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_pgm(bytes, path.string());
}

std::string pgm_bytes(const Image& img) {
  const double peak = *std::max_element(img.pixels().begin(), img.pixels().end());
  std::string out = fmt::format("P5\n{} {}\n65535\n", img.width(), img.height());
  for (double v : img.pixels()) {
    const auto q = peak > 0.0 ? static_cast<unsigned>(std::lround(v / peak * 65535.0)) : 0u;
    out.push_back(static_cast<char>((q >> 8) & 0xff));
    out.push_back(static_cast<char>(q & 0xff));
  }
  return out;
}

void write_pgm(const std::filesystem::path& path, const Image& img) { core::write_text_file(path, pgm_bytes(img)); }

Image synthetic_image(std::size_t width, std::size_t height) {
  std::vector<double> px(width * height, 0.05);
  const double W = static_cast<double>(width), H = static_cast<double>(height);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const double u = (static_cast<double>(x) + 0.5) / W, v = (static_cast<double>(y) + 0.5) / H;
      double& p = px[y * width + x];
      if (u > 0.15 && u < 0.45 && v > 0.2 && v < 0.4) p = 1.0;
      if (u > 0.6 && u < 0.68 && v > 0.1 && v < 0.9) p = 0.7;
      if ((u - 0.35) * (u - 0.35) + (v - 0.7) * (v - 0.7) < 0.15 * 0.15) p = 0.85;
      if ((u - 0.82) * (u - 0.82) + (v - 0.3) * (v - 0.3) < 0.06 * 0.06) p = 1.0;
    }
  }
  return Image(width, height, std::move(px)).normalized();
}

}  // namespace ebprior::deconv
