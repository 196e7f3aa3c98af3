#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace ebprior::deconv {

/// Grayscale image, row-major, nonnegative.
class Image {
 public:
  Image(std::size_t width, std::size_t height, std::vector<double> pixels);
  static Image uniform(std::size_t width, std::size_t height);  // normalized

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return pixels_.size(); }
  double operator()(std::size_t x, std::size_t y) const { return pixels_[y * width_ + x]; }
  double& operator()(std::size_t x, std::size_t y) { return pixels_[y * width_ + x]; }
  std::span<const double> pixels() const { return pixels_; }
  std::span<double> pixels() { return pixels_; }

  double total() const;
  bool is_normalized() const;  // sums to 1 within 1e-9
  /// Scaled to unit mass; an all-zero image is an error.
  Image normalized() const;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<double> pixels_;
};

double l1_distance(const Image& a, const Image& b);

/// P2 or P5, 8- or 16-bit. The result is normalized.
Image read_pgm(const std::filesystem::path& path);
Image parse_pgm(const std::string& bytes, const std::string& source_name);
/// 16-bit P5, scaled so the brightest pixel is 65535.
std::string pgm_bytes(const Image& img);
void write_pgm(const std::filesystem::path& path, const Image& img);

/// Deterministic 0..1 test scene of rectangles and disks on a dark
/// background, normalized.
Image synthetic_image(std::size_t width, std::size_t height);

}  // namespace ebprior::deconv
