#include <charconv>
#include <iostream>
#include <map>

#include <fmt/format.h>

#include "commands.hpp"
#include "ebprior/core/io.hpp"
#include "ebprior/error.hpp"
#include "ebprior/estimators/config.hpp"
#include "ebprior/mcmc/atoms.hpp"
#include "ebprior/toy/population.hpp"
#include "manifest.hpp"
#include "models.hpp"

namespace ebprior::cli {

namespace {

struct AtomSource {
  enum class Kind { file, grid, posterior_merge } kind;
  std::string path;
  double lo = 0.0, hi = 0.0;
  std::size_t count = 0;
};

AtomSource parse_atom_source(const std::string& spec) {
  if (spec.empty()) throw ValidationError("--atoms: required (file, grid:lo:hi:n or posterior-merge)");
  if (spec == "posterior-merge") return {AtomSource::Kind::posterior_merge, {}};
  if (spec.rfind("grid:", 0) == 0) {
    std::vector<std::string> parts;
    std::size_t start = 5;
    for (std::size_t pos; (pos = spec.find(':', start)) != std::string::npos; start = pos + 1) {
      parts.push_back(spec.substr(start, pos - start));
    }
    parts.push_back(spec.substr(start));
    if (parts.size() != 3) throw ValidationError(fmt::format("--atoms: '{}' is not grid:lo:hi:n", spec));
    const auto n = core::parse_integer(parts[2], "--atoms grid count");
    if (n < 1) throw ValidationError("--atoms: grid count must be >= 1");
    return {AtomSource::Kind::grid, {}, core::parse_real(parts[0], "--atoms grid lo"),
            core::parse_real(parts[1], "--atoms grid hi"), static_cast<std::size_t>(n)};
  }
  return {AtomSource::Kind::file, spec};
}

const std::map<std::string, int> kMethods = {{"npmle", 0}, {"dsmle", 1}, {"mple", 2}, {"refprior", 3}};

estimators::IterationTrace run_method(const std::string& method, const core::AtomSet& atoms, const ModelSetup& m,
                                      const core::MeasurementSet* data, const core::WeightVector& w0,
                                      const estimators::EstimatorConfig& cfg, std::uint64_t seed) {
  const auto images = core::evaluate_model(m.model, atoms);
  if (method == "refprior") return estimators::reference_prior_run(images, m.noise, w0, cfg.mple, seed);
  if (method == "dsmle") {
    const auto smoothed = estimators::dsmle_prepare(*data, m.noise, cfg.dsmle);
    return estimators::npmle_run(core::likelihood_matrix(images, smoothed.noise, smoothed.data), w0, cfg.npmle);
  }
  const auto L = core::likelihood_matrix(images, m.noise, *data);
  if (method == "mple") return estimators::mple_run(L, images, m.noise, w0, cfg.mple, seed);
  return estimators::npmle_run(L, w0, cfg.npmle);
}

}  // namespace

void cmd_estimate(const EstimateArgs& args) {
  if (!kMethods.count(args.method)) {
    throw ValidationError(fmt::format("--method: unknown method '{}' (npmle|dsmle|mple|refprior)", args.method));
  }
  RunManifest man(args.model ? "toy estimate" : "estimate", args.out, args.seed);
  man.set_config(args.config);
  ConfigFile file;
  if (args.config) file = ConfigFile::load(*args.config);

  const bool explicit_dsmle_seed = file.take_count("dsmle", "seed").has_value();
  auto ecfg = estimators::read_estimator_config(file);
  if (!explicit_dsmle_seed) ecfg.dsmle.seed = args.seed;
  if (args.iters) ecfg.npmle.max_iter = ecfg.mple.max_iter = *args.iters;
  if (args.gamma) ecfg.mple.gamma = *args.gamma;
  if (args.bandwidth) ecfg.dsmle.bandwidth = *args.bandwidth;
  ecfg.dsmle.validate();
  ecfg.mple.validate();
  if (args.method == "mple" && !ecfg.mple.gamma) {
    throw ValidationError("mple: missing required parameter 'gamma' (use --gamma or [mple] gamma)");
  }

  const auto source = parse_atom_source(args.atoms);
  std::optional<core::MeasurementSet> data;
  if (args.data) {
    man.add_input("data", *args.data);
    data = core::read_measurements(*args.data);
    if (args.data_scale != 1.0) data = toy::rescaled(*data, args.data_scale);
  } else if (args.method != "refprior" || source.kind == AtomSource::Kind::posterior_merge) {
    throw ValidationError("--data: required for this method and atom source");
  }
  std::optional<core::WeightedAtoms> atom_file;
  if (source.kind == AtomSource::Kind::file) {
    man.add_input("atoms", source.path);
    atom_file = core::read_weighted_atoms(source.path);
  }

  const std::size_t identity_dim = data ? data->dim() : atom_file ? atom_file->atoms.dim() : 1;
  const auto setup = read_model(file, identity_dim, data ? std::optional(data->dim()) : std::nullopt, args.model,
                                args.sigma);
  const auto sampling = read_atom_sampling(file, args.seed);
  file.finish();

  std::map<std::string, core::MeasurementSet> groups;
  if (args.group_by) {
    if (!data) throw ValidationError("--group-by: needs --data");
    for (const auto& rec : data->records()) {
      if (!rec.group || rec.group->empty()) {
        throw ValidationError(fmt::format("--group-by: record '{}' has no group label", rec.id));
      }
      for (char c : *rec.group) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) {
          throw ValidationError(fmt::format("--group-by: group label '{}' is not usable in a file name", *rec.group));
        }
      }
    }
    groups = data->split_by_group();
  } else if (data) {
    groups.emplace("", *data);
  }

  man.set_parameter("method", args.method);
  man.set_parameter("atoms", args.atoms);
  man.set_parameter("model", setup.model.name());
  man.set_parameter("group_by", args.group_by);
  if (args.method == "mple" || args.method == "refprior") {
    man.set_parameter("gamma", ecfg.mple.gamma.value_or(1.0));
  }

  const auto estimate_one = [&](const std::string& label, const core::MeasurementSet* subset) {
    std::optional<core::AtomSet> atoms;
    std::optional<core::WeightVector> w0;
    switch (source.kind) {
      case AtomSource::Kind::file:
        if (atom_file->atoms.dim() != setup.model.dim_param()) {
          throw ValidationError(fmt::format("--atoms: atoms have dimension {} but model '{}' expects {}",
                                            atom_file->atoms.dim(), setup.model.name(), setup.model.dim_param()));
        }
        atoms = atom_file->atoms;
        w0 = atom_file->weights;
        break;
      case AtomSource::Kind::grid:
        if (setup.model.dim_param() != 1) throw ValidationError("--atoms grid: only for one-parameter models");
        atoms = core::AtomSet::grid_1d(source.lo, source.hi, source.count);
        break;
      case AtomSource::Kind::posterior_merge: {
        std::vector<mcmc::Chain> chains;
        atoms = mcmc::build_atom_set(setup.model, setup.noise, setup.prior0, *subset, sampling.per_measurement,
                                     sampling.sampler, &chains);
        std::size_t accepted = 0;
        for (const auto& c : chains) accepted += c.acceptance_count;
        man.set_metric(fmt::format("mcmc_acceptance{}", label.empty() ? "" : "_" + label),
                       static_cast<double>(accepted) / static_cast<double>(chains.size() * sampling.sampler.steps));
        break;
      }
    }
    const auto start = w0.value_or(core::WeightVector::uniform(atoms->size()));
    const auto trace = run_method(args.method, *atoms, setup, subset, start, ecfg, args.seed);
    const std::string suffix = label.empty() ? "" : "_" + label;
    man.write_output("weights" + suffix + ".csv", core::weighted_atoms_to_csv(*atoms, trace.final_weights));
    man.write_output("trace" + suffix + ".csv", estimators::trace_to_csv(trace));
    man.set_metric("iterations" + suffix, trace.iterations());
    man.set_metric("termination" + suffix, std::string(estimators::to_string(trace.reason)));
    man.set_metric("objective" + suffix, trace.records.back().objective);
    std::cout << fmt::format("{}{}: K = {}, {} iterations ({}), objective {}\n", args.method,
                             label.empty() ? "" : " [" + label + "]", atoms->size(), trace.iterations(),
                             estimators::to_string(trace.reason), core::format_real(trace.records.back().objective));
  };

  if (groups.empty()) {
    estimate_one("", nullptr);
  } else {
    for (const auto& [label, subset] : groups) estimate_one(label, &subset);
  }
  man.finish();
}

}  // namespace ebprior::cli
