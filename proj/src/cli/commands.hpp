#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ebprior::cli {

struct EstimateArgs {
  std::optional<std::string> config;
  std::optional<std::string> data;
  std::string atoms;  // file, grid:lo:hi:n or posterior-merge
  std::string method = "npmle";
  bool group_by = false;
  std::uint64_t seed = 0;
  std::string out;
  std::optional<std::size_t> iters;
  std::optional<double> gamma;
  std::optional<double> bandwidth;
  // set by `toy estimate`
  std::optional<std::string> model;
  double data_scale = 1.0;
  std::optional<double> sigma;
};

struct ToyArgs {
  std::string action;  // generate | measure | estimate | treat | evaluate
  std::optional<std::string> config;
  std::optional<std::string> population;
  std::optional<std::string> data;
  std::optional<std::string> weights;
  std::optional<std::string> treatment;
  std::string model = "spring1";
  double sigma_cm = 1.0;
  bool group_by = false;
  std::uint64_t seed = 0;
  std::string out;
  EstimateArgs estimate;
};

struct DeconvolveArgs {
  std::string blurred;
  std::optional<std::string> psf;
  std::optional<double> psf_sigma;
  std::size_t iters = 50;
  std::string boundary = "reflect";
  std::optional<std::string> original;
  std::optional<std::string> start;
  std::string out;
};

struct PlotDataArgs {
  std::string action;  // profile | fan | overlay
  std::optional<std::string> weights;
  std::optional<std::string> data;
  std::string model = "identity";
  std::size_t samples = 100;
  std::optional<double> bandwidth;
  std::size_t points = 200;
  double t_max = 10.0;
  std::size_t t_points = 201;
  double scale = 1.0;
  std::uint64_t seed = 0;
  std::string out;
};

void cmd_estimate(const EstimateArgs& args);
void cmd_toy(const ToyArgs& args);
void cmd_deconvolve(const DeconvolveArgs& args);
void cmd_plotdata(const PlotDataArgs& args);

}  // namespace ebprior::cli
