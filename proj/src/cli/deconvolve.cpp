#include <algorithm>
#include <cmath>
#include <iostream>

#include <fmt/format.h>

#include "commands.hpp"
#include "ebprior/core/csv.hpp"
#include "ebprior/deconv/deconvolve.hpp"
#include "ebprior/error.hpp"
#include "manifest.hpp"

namespace ebprior::cli {

void cmd_deconvolve(const DeconvolveArgs& args) {
  if (args.psf.has_value() == args.psf_sigma.has_value()) {
    throw ValidationError("deconvolve: give exactly one of --psf and --psf-sigma");
  }
  const auto boundary = deconv::parse_boundary(args.boundary);
  RunManifest man("deconvolve", args.out, 0);
  man.set_config(std::nullopt);
  man.add_input("blurred", args.blurred);
  const auto blurred = deconv::read_pgm(args.blurred);

  std::optional<deconv::Psf> psf;
  if (args.psf) {
    man.add_input("psf", *args.psf);
    psf = deconv::read_psf(*args.psf, boundary);
  } else {
    if (!(*args.psf_sigma > 0.0)) throw ValidationError("--psf-sigma: must be > 0");
    psf = deconv::Psf::gaussian(*args.psf_sigma, std::nullopt, boundary);
    man.set_parameter("psf_sigma", *args.psf_sigma);
  }
  std::optional<deconv::Image> start;
  if (args.start) {
    man.add_input("start", *args.start);
    start = deconv::read_pgm(*args.start);
  }
  std::optional<deconv::Image> original;
  if (args.original) {
    man.add_input("original", *args.original);
    original = deconv::read_pgm(*args.original);
    if (original->width() != blurred.width() || original->height() != blurred.height()) {
      throw ValidationError(fmt::format("--original: {}x{} image, blurred is {}x{}", original->width(),
                                        original->height(), blurred.width(), blurred.height()));
    }
  }
  man.set_parameter("iters", args.iters);
  man.set_parameter("boundary", std::string(deconv::to_string(boundary)));

  const auto result = deconv::deconvolve(blurred, *psf, args.iters, start);

  std::string trace = "iter,objective\n";
  for (std::size_t n = 0; n < result.objective.size(); ++n) {
    trace += fmt::format("{},{}\n", n, core::format_real(result.objective[n]));
  }
  std::string values = "x,y,value\n";
  for (std::size_t y = 0; y < result.estimate.height(); ++y) {
    for (std::size_t x = 0; x < result.estimate.width(); ++x) {
      values += fmt::format("{},{},{}\n", x, y, core::format_real(result.estimate(x, y)));
    }
  }
  man.write_output("estimate.pgm", deconv::pgm_bytes(result.estimate));
  man.write_output("estimate.csv", values);
  man.write_output("psf.txt", deconv::psf_to_text(*psf));
  man.write_output("trace.csv", trace);
  man.set_metric("objective", result.objective.back());
  if (original) {
    const double before = deconv::l1_distance(blurred, *original);
    const double after = deconv::l1_distance(result.estimate, *original);
    man.set_metric("l1_blurred", before);
    man.set_metric("l1_estimate", after);
    man.set_metric("l1_improvement", before - after);
    std::cout << fmt::format("L1 to original: blurred {:.6f}, estimate {:.6f}\n", before, after);
  }
  for (std::size_t n = 1; n < result.objective.size(); ++n) {
    const double prev = result.objective[n - 1];
    if (result.objective[n] < prev - 1e-12 * std::max(1.0, std::abs(prev))) {
      man.finish();
      throw NumericalError(fmt::format("deconvolve: objective decreased at iteration {} ({} -> {})", n,
                                       core::format_real(prev), core::format_real(result.objective[n])));
    }
  }
  std::cout << fmt::format("{} iterations, objective {}\n", args.iters, core::format_real(result.objective.back()));
  man.finish();
}

}  // namespace ebprior::cli
