#include "ebprior/cli/app.hpp"

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "ebprior/error.hpp"
#include "ebprior/parallel.hpp"

namespace ebprior::cli {

namespace {

void add_estimate_flags(CLI::App& sub, EstimateArgs& e) {
  sub.add_option("--atoms", e.atoms, "atom file, grid:lo:hi:n or posterior-merge");
  sub.add_option("--method", e.method, "npmle, dsmle, mple or refprior")
      ->check(CLI::IsMember({"npmle", "dsmle", "mple", "refprior"}));
  sub.add_option("--iters", e.iters, "iteration cap for npmle, dsmle and mple");
  sub.add_option("--gamma", e.gamma, "MPLE entropy weight");
  sub.add_option("--bandwidth", e.bandwidth, "DS-MLE kernel bandwidth");
}

}  // namespace

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"Empirical Bayes prior estimation from population measurements"};
  app.name("ebprior");
  app.set_version_flag("--version", std::string(EBPRIOR_VERSION));
  app.require_subcommand(1);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = all cores)");
  app.fallthrough();

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "estimate a prior from measurements");
  estimate->add_option("--config", est.config, "INI config file");
  estimate->add_option("--data", est.data, "measurement CSV");
  estimate->add_flag("--group-by", est.group_by, "one estimate per group label");
  estimate->add_option("--seed", est.seed, "master seed");
  estimate->add_option("--out", est.out, "output directory")->required();
  add_estimate_flags(*estimate, est);

  ToyArgs toy;
  auto* toy_cmd = app.add_subcommand("toy", "spring toy model pipeline");
  toy_cmd->add_option("action", toy.action, "generate, measure, estimate, treat or evaluate")
      ->required()
      ->check(CLI::IsMember({"generate", "measure", "estimate", "treat", "evaluate"}));
  toy_cmd->add_option("--config", toy.config, "INI config file");
  toy_cmd->add_option("--population", toy.population, "population CSV");
  toy_cmd->add_option("--data", toy.data, "measurement CSV in cm");
  toy_cmd->add_option("--weights", toy.weights, "prior weights CSV");
  toy_cmd->add_option("--treatment", toy.treatment, "treatment spec INI");
  toy_cmd->add_option("--model", toy.model, "spring1 or spring2");
  toy_cmd->add_option("--sigma", toy.sigma_cm, "measurement noise in cm");
  toy_cmd->add_flag("--group-by", toy.group_by, "label records by box");
  toy_cmd->add_option("--seed", toy.seed, "master seed");
  toy_cmd->add_option("--out", toy.out, "output directory")->required();
  add_estimate_flags(*toy_cmd, toy.estimate);

  DeconvolveArgs dec;
  auto* dec_cmd = app.add_subcommand("deconvolve", "multiplicative deconvolution of a PGM image");
  dec_cmd->add_option("--blurred", dec.blurred, "blurred PGM image")->required();
  dec_cmd->add_option("--psf", dec.psf, "PSF as PGM or text");
  dec_cmd->add_option("--psf-sigma", dec.psf_sigma, "Gaussian PSF width in pixels");
  dec_cmd->add_option("--iters", dec.iters, "iterations");
  dec_cmd->add_option("--boundary", dec.boundary, "reflect, periodic or zero");
  dec_cmd->add_option("--original", dec.original, "ground truth PGM for error metrics");
  dec_cmd->add_option("--start", dec.start, "start image (default uniform)");
  dec_cmd->add_option("--out", dec.out, "output directory")->required();

  PlotDataArgs plot;
  auto* plot_cmd = app.add_subcommand("plotdata", "CSV data behind prior, fan and overlay plots");
  plot_cmd->add_option("action", plot.action, "profile, fan or overlay")
      ->required()
      ->check(CLI::IsMember({"profile", "fan", "overlay"}));
  plot_cmd->add_option("--weights", plot.weights, "prior weights CSV");
  plot_cmd->add_option("--data", plot.data, "measurement CSV");
  plot_cmd->add_option("--model", plot.model, "forward model for fans");
  plot_cmd->add_option("--samples", plot.samples, "fan trajectories");
  plot_cmd->add_option("--bandwidth", plot.bandwidth, "profile kernel bandwidth");
  plot_cmd->add_option("--points", plot.points, "profile grid points");
  plot_cmd->add_option("--t-max", plot.t_max, "fan time horizon (spring models)");
  plot_cmd->add_option("--t-points", plot.t_points, "fan time points (spring models)");
  plot_cmd->add_option("--scale", plot.scale, "multiplier for plotted values");
  plot_cmd->add_option("--seed", plot.seed, "sampling seed");
  plot_cmd->add_option("--out", plot.out, "output directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    set_thread_count(threads);
    if (estimate->parsed()) cmd_estimate(est);
    if (toy_cmd->parsed()) cmd_toy(toy);
    if (dec_cmd->parsed()) cmd_deconvolve(dec);
    if (plot_cmd->parsed()) cmd_plotdata(plot);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace ebprior::cli
