#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "commands.hpp"
#include "ebprior/core/io.hpp"
#include "ebprior/error.hpp"
#include "ebprior/random.hpp"
#include "ebprior/toy/spring.hpp"
#include "manifest.hpp"
#include "models.hpp"

namespace ebprior::cli {

namespace {

namespace fs = std::filesystem;

// Plot data goes next to, never into, the run directories it reads.
void check_out_dir(const std::string& out, const std::vector<std::string>& inputs) {
  std::error_code ec;
  for (const auto& in : inputs) {
    const auto dir = fs::absolute(in).parent_path();
    if (fs::exists(out) && fs::equivalent(dir, out, ec)) {
      throw ValidationError(fmt::format("--out: '{}' is the directory of input '{}'", out, in));
    }
  }
}

core::WeightedAtoms load_prior(const std::optional<std::string>& path, RunManifest& man) {
  if (!path) throw ValidationError("--weights: required");
  man.add_input("weights", *path);
  auto prior = core::read_weighted_atoms(*path);
  if (!prior.weights) throw ValidationError(fmt::format("{}: no weight column 'w'", *path));
  return prior;
}

// Sorted sample quantile with linear interpolation between order statistics.
double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

void profile(const PlotDataArgs& args, RunManifest& man) {
  const auto prior = load_prior(args.weights, man);
  const auto& atoms = prior.atoms;
  const auto& w = *prior.weights;
  if (args.points < 2) throw ValidationError("--points: must be >= 2");
  std::string csv = "coord,x,density\n";
  for (std::size_t j = 0; j < atoms.dim(); ++j) {
    double lo = atoms[0][j], hi = atoms[0][j], mean = 0.0, sq = 0.0, w2 = 0.0;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      lo = std::min(lo, atoms[k][j]);
      hi = std::max(hi, atoms[k][j]);
      mean += w[k] * atoms[k][j];
      w2 += w[k] * w[k];
    }
    for (std::size_t k = 0; k < atoms.size(); ++k) sq += w[k] * (atoms[k][j] - mean) * (atoms[k][j] - mean);
    double h = args.bandwidth.value_or(1.06 * std::sqrt(sq) * std::pow(1.0 / w2, -0.2));
    if (!(h > 0.0)) h = hi > lo ? (hi - lo) / 100.0 : std::max(1e-3, 1e-3 * std::abs(lo));
    const double a = lo - 3.0 * h, b = hi + 3.0 * h;
    for (std::size_t i = 0; i < args.points; ++i) {
      const double x = a + (b - a) * static_cast<double>(i) / static_cast<double>(args.points - 1);
      double d = 0.0;
      for (std::size_t k = 0; k < atoms.size(); ++k) {
        const double u = (x - atoms[k][j]) / h;
        d += w[k] * std::exp(-0.5 * u * u);
      }
      d /= h * std::sqrt(2.0 * std::numbers::pi);
      csv += fmt::format("{},{},{}\n", j, core::format_real(x * args.scale), core::format_real(d / args.scale));
    }
    man.set_metric(fmt::format("bandwidth_{}", j), h);
  }
  man.write_output("profile.csv", csv);
}

void fan(const PlotDataArgs& args, RunManifest& man) {
  const auto prior = load_prior(args.weights, man);
  const auto& atoms = prior.atoms;
  const auto model = model_by_name(args.model, atoms.dim());
  if (model.dim_param() != atoms.dim()) {
    throw ValidationError(fmt::format("--model: '{}' takes {} parameters, atoms have {}", args.model,
                                      model.dim_param(), atoms.dim()));
  }
  const bool spring = args.model.starts_with("spring");
  std::vector<double> times;
  if (spring) {
    if (args.t_points < 2 || !(args.t_max > 0.0)) throw ValidationError("--t-points >= 2 and --t-max > 0 required");
    for (std::size_t i = 0; i < args.t_points; ++i) {
      times.push_back(args.t_max * static_cast<double>(i) / static_cast<double>(args.t_points - 1));
    }
  } else {
    for (std::size_t i = 0; i < model.dim_obs(); ++i) times.push_back(static_cast<double>(i));
  }

  auto rng = make_stream(args.seed, "fan");
  const auto& wv = prior.weights->values();
  std::discrete_distribution<std::size_t> pick(wv.begin(), wv.end());
  std::vector<std::vector<double>> columns(times.size());
  std::string csv = "sample,t,value\n";
  for (std::size_t q = 0; q < args.samples; ++q) {
    const auto x = atoms[pick(rng)];
    std::vector<double> values;
    if (spring) {
      for (double t : times) values.push_back(toy::spring_response(x[0], toy::kDefaultMass, t));
    } else {
      values = model(x);
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double v = values[i] * args.scale;
      columns[i].push_back(v);
      csv += fmt::format("{},{},{}\n", q, core::format_real(times[i]), core::format_real(v));
    }
  }
  std::string stats = "t,q05,median,q95\n";
  if (args.samples > 0) {
    for (std::size_t i = 0; i < times.size(); ++i) {
      stats += fmt::format("{},{},{},{}\n", core::format_real(times[i]), core::format_real(quantile(columns[i], 0.05)),
                           core::format_real(quantile(columns[i], 0.5)),
                           core::format_real(quantile(columns[i], 0.95)));
    }
  }
  man.set_parameter("model", args.model);
  man.set_parameter("samples", args.samples);
  man.write_output("fan.csv", csv);
  man.write_output("fan_stats.csv", stats);
}

void overlay(const PlotDataArgs& args, RunManifest& man) {
  if (!args.data) throw ValidationError("--data: required");
  man.add_input("data", *args.data);
  const auto data = core::read_measurements(*args.data);
  std::string csv = "id,group,coord,value\n";
  for (const auto& r : data.records()) {
    for (std::size_t j = 0; j < data.dim(); ++j) {
      if (!r.mask[j]) continue;
      csv += fmt::format("{},{},{},{}\n", r.id, r.group.value_or(""), j, core::format_real(r.z[j] * args.scale));
    }
  }
  man.write_output("overlay.csv", csv);
}

}  // namespace

void cmd_plotdata(const PlotDataArgs& args) {
  if (args.action != "profile" && args.action != "fan" && args.action != "overlay") {
    throw ValidationError(fmt::format("plotdata: unknown action '{}'", args.action));
  }
  std::vector<std::string> inputs;
  for (const auto& p : {args.weights, args.data}) {
    if (p) {
      if (!fs::exists(*p)) throw ValidationError(fmt::format("{}: no such file", *p));
      inputs.push_back(*p);
    }
  }
  check_out_dir(args.out, inputs);
  if (!(std::isfinite(args.scale) && args.scale > 0.0)) throw ValidationError("--scale: must be > 0");
  RunManifest man("plotdata " + args.action, args.out, args.seed);
  man.set_config(std::nullopt);
  man.set_parameter("scale", args.scale);
  if (args.action == "profile") profile(args, man);
  if (args.action == "fan") fan(args, man);
  if (args.action == "overlay") overlay(args, man);
  std::cout << fmt::format("plot data written to {}\n", args.out);
  man.finish();
}

}  // namespace ebprior::cli
