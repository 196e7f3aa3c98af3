#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ebprior/core/likelihood.hpp"
#include "ebprior/deconv/image.hpp"

namespace ebprior::deconv {

enum class Boundary { reflect, periodic, zero };
std::string_view to_string(Boundary b);
Boundary parse_boundary(std::string_view text);

/// Convolution kernel with odd dimensions, nonnegative, unit mass.
class Psf {
 public:
  /// Requires the kernel to sum to 1 within 1e-12.
  Psf(std::size_t width, std::size_t height, std::vector<double> kernel, Boundary boundary = Boundary::reflect);
  /// Rescales an arbitrary nonnegative kernel to unit mass.
  static Psf normalized(std::size_t width, std::size_t height, std::vector<double> kernel,
                        Boundary boundary = Boundary::reflect);
  static Psf delta(Boundary boundary = Boundary::reflect);
  /// Sampled isotropic Gaussian on a (2r+1)^2 grid, r = ceil(3 sigma) by default.
  static Psf gaussian(double sigma, std::optional<std::size_t> radius = std::nullopt,
                      Boundary boundary = Boundary::reflect);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  Boundary boundary() const { return boundary_; }
  Psf with_boundary(Boundary b) const;
  /// Weight of offset (dx, dy) from the center.
  double at(long dx, long dy) const;
  long rx() const { return static_cast<long>(width_ / 2); }
  long ry() const { return static_cast<long>(height_ / 2); }

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<double> kernel_;
  Boundary boundary_;
};

/// Whitespace-separated rows of numbers; '#' starts a comment. The kernel is
/// normalized on load.
Psf parse_psf_text(const std::string& text, Boundary boundary = Boundary::reflect);
Psf read_psf(const std::filesystem::path& path, Boundary boundary = Boundary::reflect);
std::string psf_to_text(const Psf& psf);

/// Pixel x spreads psf(k) of its mass to pixel x + k. Off-image targets are
/// mirrored (reflect, half-sample symmetric), wrapped (periodic) or dropped
/// (zero), so reflect and periodic preserve mass.
Image blur(const Image& img, const Psf& psf);
/// Adjoint of blur: out(x) = sum_k psf(k) img(target(x + k)).
Image blur_adjoint(const Image& img, const Psf& psf);

struct DeconvResult {
  Image estimate;
  std::vector<double> objective;  // sum_z b(z) log (pi_n * psf)(z), n = 0..n_iter
};

/// pi <- pi * blur_adjoint(b / max(blur(pi), 1e-300)), renormalized.
DeconvResult deconvolve(const Image& blurred, const Psf& psf, std::size_t n_iter,
                        const std::optional<Image>& start = std::nullopt);

/// Column k holds the blur of a unit mass at pixel k (log scale); rows are
/// pixels. Used to express deconvolution as an NPMLE problem.
core::LikelihoodMatrix blur_likelihood(std::size_t width, std::size_t height, const Psf& psf);

}  // namespace ebprior::deconv
