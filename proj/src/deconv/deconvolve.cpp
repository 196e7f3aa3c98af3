#include "ebprior/deconv/deconvolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "ebprior/core/csv.hpp"
#include "ebprior/error.hpp"

namespace ebprior::deconv {

namespace {

constexpr double kPixelFloor = 1e-300;

// Index of the pixel receiving mass sent to coordinate i, or -1 if dropped.
long target_index(long i, long n, Boundary b) {
  if (i >= 0 && i < n) return i;
  switch (b) {
    case Boundary::zero:
      return -1;
    case Boundary::periodic:
      return ((i % n) + n) % n;
    case Boundary::reflect: {
      const long j = ((i % (2 * n)) + 2 * n) % (2 * n);
      return j < n ? j : 2 * n - 1 - j;
    }
  }
  return -1;
}

}  // namespace

std::string_view to_string(Boundary b) {
  switch (b) {
    case Boundary::reflect:
      return "reflect";
    case Boundary::periodic:
      return "periodic";
    case Boundary::zero:
      return "zero";
  }
  return "?";
}

Boundary parse_boundary(std::string_view text) {
  if (text == "reflect") return Boundary::reflect;
  if (text == "periodic") return Boundary::periodic;
  if (text == "zero") return Boundary::zero;
  throw ValidationError(fmt::format("unknown boundary mode '{}' (reflect|periodic|zero)", text));
}

Psf::Psf(std::size_t width, std::size_t height, std::vector<double> kernel, Boundary boundary)
    : width_(width), height_(height), kernel_(std::move(kernel)), boundary_(boundary) {
  if (width % 2 == 0 || height % 2 == 0) {
    throw ValidationError(fmt::format("psf: kernel size {}x{} must be odd in both directions", width, height));
  }
  if (kernel_.size() != width * height) throw ValidationError("psf: kernel size does not match its dimensions");
  double s = 0.0;
  for (double v : kernel_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("psf: entries must be finite and >= 0");
    s += v;
  }
  if (std::abs(s - 1.0) > 1e-12) throw ValidationError(fmt::format("psf: kernel sums to {}, not 1", s));
}

Psf Psf::normalized(std::size_t width, std::size_t height, std::vector<double> kernel, Boundary boundary) {
  double s = 0.0;
  for (double v : kernel) s += v;
  if (!(s > 0.0) || !std::isfinite(s)) throw ValidationError("psf: kernel has no positive mass");
  for (double& v : kernel) v /= s;
  return Psf(width, height, std::move(kernel), boundary);
}

Psf Psf::delta(Boundary boundary) { return Psf(1, 1, {1.0}, boundary); }

Psf Psf::gaussian(double sigma, std::optional<std::size_t> radius, Boundary boundary) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValidationError("psf: gaussian sigma must be > 0");
  const auto r = static_cast<long>(radius.value_or(static_cast<std::size_t>(std::ceil(3.0 * sigma))));
  const auto n = static_cast<std::size_t>(2 * r + 1);
  std::vector<double> k;
  k.reserve(n * n);
  for (long dy = -r; dy <= r; ++dy) {
    for (long dx = -r; dx <= r; ++dx) {
      k.push_back(std::exp(-0.5 * static_cast<double>(dx * dx + dy * dy) / (sigma * sigma)));
    }
  }
  return normalized(n, n, std::move(k), boundary);
}

Psf Psf::with_boundary(Boundary b) const {
  Psf p = *this;
  p.boundary_ = b;
  return p;
}

double Psf::at(long dx, long dy) const {
  return kernel_[static_cast<std::size_t>(dy + ry()) * width_ + static_cast<std::size_t>(dx + rx())];
}

Psf parse_psf_text(const std::string& text, Boundary boundary) {
  std::istringstream in(text);
  std::string line;
  std::vector<double> k;
  std::size_t width = 0, height = 0;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string f;
    std::size_t count = 0;
    while (fields >> f) {
      k.push_back(core::parse_real(f, "psf entry"));
      ++count;
    }
    if (count == 0) continue;
    if (width == 0) width = count;
    if (count != width) throw ValidationError("psf: rows have different lengths");
    ++height;
  }
  if (height == 0) throw ValidationError("psf: empty kernel");
  return Psf::normalized(width, height, std::move(k), boundary);
}

Psf read_psf(const std::filesystem::path& path, Boundary boundary) {
  if (path.extension() == ".pgm") {
    const auto img = read_pgm(path);
    return Psf::normalized(img.width(), img.height(), {img.pixels().begin(), img.pixels().end()}, boundary);
  }
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("cannot open psf '{}'", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_psf_text(ss.str(), boundary);
}

std::string psf_to_text(const Psf& psf) {
  std::string out;
  for (long dy = -psf.ry(); dy <= psf.ry(); ++dy) {
    for (long dx = -psf.rx(); dx <= psf.rx(); ++dx) {
      if (dx > -psf.rx()) out += ' ';
      out += core::format_real(psf.at(dx, dy));
    }
    out += '\n';
  }
  return out;
}

Image blur(const Image& img, const Psf& psf) {
  const auto W = static_cast<long>(img.width()), H = static_cast<long>(img.height());
  std::vector<double> out(img.size(), 0.0);
  for (long y = 0; y < H; ++y) {
    for (long x = 0; x < W; ++x) {
      const double v = img(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
      if (v == 0.0) continue;
      for (long dy = -psf.ry(); dy <= psf.ry(); ++dy) {
        const long ty = target_index(y + dy, H, psf.boundary());
        if (ty < 0) continue;
        for (long dx = -psf.rx(); dx <= psf.rx(); ++dx) {
          const long tx = target_index(x + dx, W, psf.boundary());
          if (tx < 0) continue;
          out[static_cast<std::size_t>(ty * W + tx)] += v * psf.at(dx, dy);
        }
      }
    }
  }
  return Image(img.width(), img.height(), std::move(out));
}

Image blur_adjoint(const Image& img, const Psf& psf) {
  const auto W = static_cast<long>(img.width()), H = static_cast<long>(img.height());
  std::vector<double> out(img.size(), 0.0);
  for (long y = 0; y < H; ++y) {
    for (long x = 0; x < W; ++x) {
      double s = 0.0;
      for (long dy = -psf.ry(); dy <= psf.ry(); ++dy) {
        const long ty = target_index(y + dy, H, psf.boundary());
        if (ty < 0) continue;
        for (long dx = -psf.rx(); dx <= psf.rx(); ++dx) {
          const long tx = target_index(x + dx, W, psf.boundary());
          if (tx < 0) continue;
          s += psf.at(dx, dy) * img(static_cast<std::size_t>(tx), static_cast<std::size_t>(ty));
        }
      }
      out[static_cast<std::size_t>(y * W + x)] = s;
    }
  }
  return Image(img.width(), img.height(), std::move(out));
}

namespace {

double cross_likelihood(const Image& blurred, const Image& predicted) {
  double s = 0.0;
  for (std::size_t i = 0; i < blurred.size(); ++i) {
    const double b = blurred.pixels()[i];
    if (b > 0.0) s += b * std::log(std::max(predicted.pixels()[i], kPixelFloor));
  }
  return s;
}

}  // namespace

DeconvResult deconvolve(const Image& blurred, const Psf& psf, std::size_t n_iter, const std::optional<Image>& start) {
  if (!blurred.is_normalized()) throw ValidationError("deconvolve: blurred image must be normalized");
  Image pi = start ? *start : Image::uniform(blurred.width(), blurred.height());
  if (pi.width() != blurred.width() || pi.height() != blurred.height()) {
    throw ValidationError("deconvolve: start image size differs from the blurred image");
  }
  if (!pi.is_normalized()) throw ValidationError("deconvolve: start image must be normalized");

  DeconvResult out{pi, {}};
  out.objective.reserve(n_iter + 1);
  Image predicted = blur(pi, psf);
  out.objective.push_back(cross_likelihood(blurred, predicted));
  for (std::size_t it = 0; it < n_iter; ++it) {
    std::vector<double> ratio(blurred.size());
    for (std::size_t i = 0; i < ratio.size(); ++i) {
      ratio[i] = blurred.pixels()[i] / std::max(predicted.pixels()[i], kPixelFloor);
    }
    const Image correction = blur_adjoint(Image(blurred.width(), blurred.height(), std::move(ratio)), psf);
    std::vector<double> next(pi.size());
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = pi.pixels()[i] * correction.pixels()[i];
    pi = Image(pi.width(), pi.height(), std::move(next));
    const double total = pi.total();
    if (!(total > 0.0) || !std::isfinite(total)) throw NumericalError("deconvolve: iterate lost all mass");
    pi = pi.normalized();
    predicted = blur(pi, psf);
    out.objective.push_back(cross_likelihood(blurred, predicted));
  }
  out.estimate = std::move(pi);
  return out;
}

core::LikelihoodMatrix blur_likelihood(std::size_t width, std::size_t height, const Psf& psf) {
  const std::size_t n = width * height;
  std::vector<double> log_values(n * n, -std::numeric_limits<double>::infinity());
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> unit(n, 0.0);
    unit[k] = 1.0;
    const auto col = blur(Image(width, height, std::move(unit)), psf);
    for (std::size_t m = 0; m < n; ++m) {
      if (col.pixels()[m] > 0.0) log_values[m * n + k] = std::log(col.pixels()[m]);
    }
  }
  return core::LikelihoodMatrix(n, n, std::move(log_values));
}

}  // namespace ebprior::deconv
