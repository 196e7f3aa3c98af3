#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "ebprior/config.hpp"
#include "ebprior/core/model.hpp"
#include "ebprior/mcmc/atoms.hpp"
#include "ebprior/mcmc/sampler.hpp"

namespace ebprior::cli {

struct ModelSetup {
  core::ForwardModel model;
  core::NoiseModel noise;
  mcmc::Prior0 prior0;
};

/// Forward model by name: identity, spring1, spring2 or ode-fixture.
core::ForwardModel model_by_name(const std::string& name, std::size_t identity_dim);

/// [model] name, sigma (one value or one per coordinate), prior_lo, prior_hi.
/// `name` and `sigma` given here take precedence over the file. The identity
/// model takes dimension `identity_dim`; `data_dim`, when known, must match
/// the model output.
ModelSetup read_model(ConfigFile& file, std::size_t identity_dim, std::optional<std::size_t> data_dim,
                      const std::optional<std::string>& name, const std::optional<double>& sigma);

/// [mcmc] steps, burn_in, proposal_scale, adaptive, beta, per_measurement.
struct AtomSampling {
  mcmc::SamplerConfig sampler;
  std::size_t per_measurement = 5;
};
AtomSampling read_atom_sampling(ConfigFile& file, std::uint64_t seed);

}  // namespace ebprior::cli
