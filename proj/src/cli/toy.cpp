#include <algorithm>
#include <iostream>

#include <fmt/format.h>

#include "commands.hpp"
#include "ebprior/core/io.hpp"
#include "ebprior/error.hpp"
#include "ebprior/estimators/config.hpp"
#include "ebprior/toy/experiment.hpp"
#include "manifest.hpp"
#include "models.hpp"

namespace ebprior::cli {

namespace {

toy::PopulationParams read_population_params(ConfigFile& file, std::uint64_t seed) {
  toy::PopulationParams p;
  p.seed = seed;
  const std::string sec = "population";
  if (auto v = file.take_real(sec, "k1")) p.k1 = *v;
  if (auto v = file.take_real(sec, "k2")) p.k2 = *v;
  if (auto v = file.take_count(sec, "n1")) p.n1 = *v;
  if (auto v = file.take_count(sec, "n2")) p.n2 = *v;
  if (auto v = file.take_real(sec, "relative_std")) p.relative_std = *v;
  if (auto v = file.take_count(sec, "seed")) p.seed = *v;
  file.finish_section(sec);
  p.validate();
  return p;
}

std::vector<double> spring_times(const std::string& model) {
  if (model == "spring1") return {1.0};
  if (model == "spring2") return {1.0, 1.7};
  throw ValidationError(fmt::format("--model: toy commands take spring1 or spring2, not '{}'", model));
}

ConfigFile load_optional(const std::optional<std::string>& path) {
  return path ? ConfigFile::load(*path) : ConfigFile{};
}

toy::TreatmentSpec load_treatment(const ToyArgs& args, ConfigFile& file, RunManifest& man) {
  if (args.treatment) {
    man.add_input("treatment", *args.treatment);
    return toy::read_treatment_spec(std::filesystem::path(*args.treatment));
  }
  return toy::read_treatment_spec(file);
}

void generate(const ToyArgs& args) {
  RunManifest man("toy generate", args.out, args.seed);
  man.set_config(args.config);
  auto file = load_optional(args.config);
  const auto params = read_population_params(file, args.seed);
  file.finish();
  const auto pop = toy::generate_population(params);
  man.write_output("population.csv", toy::population_to_csv(pop));
  man.set_metric("springs", pop.size());
  std::cout << fmt::format("generated {} springs\n", pop.size());
  man.finish();
}

void measure(const ToyArgs& args) {
  if (!args.population) throw ValidationError("--population: required");
  RunManifest man("toy measure", args.out, args.seed);
  man.set_config(std::nullopt);
  man.add_input("population", *args.population);
  const auto pop = toy::read_population(*args.population);
  if (!(args.sigma_cm >= 0.0)) throw ValidationError("--sigma: must be >= 0");
  const auto data = toy::measure_population(pop, toy::spring_model(spring_times(args.model)),
                                            args.sigma_cm / toy::kCentimetersPerMeter, args.seed, args.group_by);
  man.set_parameter("model", args.model);
  man.set_parameter("sigma_cm", args.sigma_cm);
  man.write_output("measurements.csv", core::measurements_to_csv(toy::rescaled(data, toy::kCentimetersPerMeter)));
  std::cout << fmt::format("measured {} springs\n", data.size());
  man.finish();
}

void estimate(const ToyArgs& args) {
  (void)spring_times(args.model);
  EstimateArgs e = args.estimate;
  e.config = args.config;
  e.data = args.data;
  e.seed = args.seed;
  e.out = args.out;
  e.group_by = args.group_by;
  e.model = args.model;
  e.data_scale = 1.0 / toy::kCentimetersPerMeter;
  e.sigma = args.sigma_cm / toy::kCentimetersPerMeter;
  if (e.atoms.empty()) e.atoms = "grid:1:50:200";
  cmd_estimate(e);
}

void treat(const ToyArgs& args) {
  if (!args.weights || !args.data) throw ValidationError("toy treat: --weights and --data are required");
  RunManifest man("toy treat", args.out, args.seed);
  man.set_config(args.config);
  auto file = load_optional(args.config);
  const auto spec = load_treatment(args, file, man);
  file.finish();
  man.add_input("weights", *args.weights);
  man.add_input("data", *args.data);
  const auto prior = core::read_weighted_atoms(*args.weights);
  if (!prior.weights) throw ValidationError(fmt::format("{}: no weight column 'w'", *args.weights));
  const auto data = toy::rescaled(core::read_measurements(*args.data), 1.0 / toy::kCentimetersPerMeter);
  const auto model = toy::spring_model(spring_times(args.model), spec.mass, spec.x0);
  if (data.dim() != model.dim_obs()) {
    throw ValidationError(fmt::format("--data: {} values per record but model '{}' predicts {}", data.dim(),
                                      args.model, model.dim_obs()));
  }
  const auto L = core::likelihood_matrix(model, core::NoiseModel::gaussian(data.dim(), args.sigma_cm / 100.0),
                                         prior.atoms, data);
  const auto indicators = toy::success_indicators(prior.atoms, spec);
  const auto rates = toy::posterior_success_rates(L, *prior.weights, indicators);

  std::optional<toy::SpringPopulation> pop;
  std::vector<double> truth;
  if (args.population) {
    man.add_input("population", *args.population);
    pop = toy::read_population(*args.population);
    truth.assign(data.size(), 0.0);
    for (std::size_t m = 0; m < data.size(); ++m) {
      const auto it = std::find(pop->id.begin(), pop->id.end(), data[m].id);
      if (it == pop->id.end()) throw ValidationError(fmt::format("--population: no spring '{}'", data[m].id));
      truth[m] = toy::treatment_succeeds(pop->stiffness[static_cast<std::size_t>(it - pop->id.begin())], spec) ? 1 : 0;
    }
  }
  std::string csv = pop ? "id,R,R_true\n" : "id,R\n";
  double mean = 0.0;
  for (std::size_t m = 0; m < data.size(); ++m) {
    csv += data[m].id + "," + core::format_real(rates[m]);
    csv += pop ? "," + core::format_real(truth[m]) + "\n" : "\n";
    mean += rates[m] / static_cast<double>(data.size());
  }
  man.write_output("success_rates.csv", csv);
  man.write_output("treatment.ini", toy::treatment_spec_to_text(spec));
  man.set_metric("mean_success_rate", mean);
  if (pop && data.size() >= 2) man.set_metric("sigma_R", toy::success_rate_std(rates, truth));
  std::cout << fmt::format("mean predicted success rate {}\n", core::format_real(mean));
  man.finish();
}

void evaluate(const ToyArgs& args) {
  RunManifest man("toy evaluate", args.out, args.seed);
  man.set_config(args.config);
  auto file = load_optional(args.config);
  toy::ToyExperimentConfig cfg;
  cfg.seed = args.seed;
  cfg.population = read_population_params(file, args.seed);
  cfg.treatment = load_treatment(args, file, man);
  const auto ecfg = estimators::read_estimator_config(file);
  cfg.iterations = ecfg.npmle.max_iter;
  cfg.dsmle = ecfg.dsmle;
  const auto gamma = cfg.mple.gamma;
  cfg.mple = ecfg.mple;
  if (!cfg.mple.gamma) cfg.mple.gamma = gamma;
  cfg.times = spring_times(file.take("toy", "model").value_or(args.model));
  if (auto v = file.take_real("toy", "sigma_cm")) cfg.sigma = *v / toy::kCentimetersPerMeter;
  else cfg.sigma = args.sigma_cm / toy::kCentimetersPerMeter;
  if (auto v = file.take_count("toy", "atoms")) cfg.atoms = *v;
  if (auto v = file.take_real("toy", "k_lo")) cfg.k_lo = *v;
  if (auto v = file.take_real("toy", "k_hi")) cfg.k_hi = *v;
  file.finish();
  if (args.estimate.iters) cfg.iterations = cfg.mple.max_iter = *args.estimate.iters;
  if (args.estimate.gamma) cfg.mple.gamma = *args.estimate.gamma;
  if (args.estimate.bandwidth) cfg.dsmle.bandwidth = *args.estimate.bandwidth;
  if (!(cfg.sigma > 0.0)) throw ValidationError("sigma must be > 0");

  const auto result = toy::run_toy_experiment(cfg);
  std::string table = "method,sigma_R\n";
  for (const auto& m : result.methods) {
    table += m.name + "," + core::format_real(m.sigma_r) + "\n";
    man.set_metric("sigma_R_" + m.name, m.sigma_r);
    std::cout << fmt::format("{:>6}  sigma_R = {:.4f}\n", m.name, m.sigma_r);
  }
  std::string rates = "id,box,K_true,R_true";
  for (const auto& m : result.methods) rates += ",R_" + m.name;
  rates += "\n";
  for (std::size_t i = 0; i < result.population.size(); ++i) {
    rates += fmt::format("{},{},{},{}", result.population.id[i], result.population.box[i],
                         core::format_real(result.population.stiffness[i]), core::format_real(result.truth[i]));
    for (const auto& m : result.methods) rates += "," + core::format_real(m.rates[i]);
    rates += "\n";
  }
  std::string priors = "K";
  for (const auto& m : result.methods) priors += ",w_" + m.name;
  priors += "\n";
  for (std::size_t k = 0; k < result.atoms.size(); ++k) {
    priors += core::format_real(result.atoms[k][0]);
    for (const auto& m : result.methods) priors += "," + core::format_real(m.prior[k]);
    priors += "\n";
  }
  man.set_parameter("iterations", cfg.iterations);
  man.set_parameter("gamma", *cfg.mple.gamma);
  man.write_output("sigma_r.csv", table);
  man.write_output("rates.csv", rates);
  man.write_output("priors.csv", priors);
  man.write_output("population.csv", toy::population_to_csv(result.population));
  man.write_output("measurements.csv",
                   core::measurements_to_csv(toy::rescaled(result.data, toy::kCentimetersPerMeter)));
  man.finish();
}

}  // namespace

void cmd_toy(const ToyArgs& args) {
  if (args.action == "generate") return generate(args);
  if (args.action == "measure") return measure(args);
  if (args.action == "estimate") return estimate(args);
  if (args.action == "treat") return treat(args);
  if (args.action == "evaluate") return evaluate(args);
  throw ValidationError(fmt::format("toy: unknown action '{}'", args.action));
}

}  // namespace ebprior::cli
