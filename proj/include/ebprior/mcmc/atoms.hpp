#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ebprior/core/atoms.hpp"
#include "ebprior/core/measurements.hpp"
#include "ebprior/core/model.hpp"
#include "ebprior/mcmc/sampler.hpp"
#include "ebprior/random.hpp"

namespace ebprior::mcmc {

/// The initial prior pi_0: an unnormalized log density plus a sampler used
/// to start the chains.
struct Prior0 {
  std::size_t dim = 0;
  std::function<double(std::span<const double>)> log_density;
  std::function<void(Rng&, std::span<double>)> sample;
};

/// log pi_0(x) + log rho_E(phi(x) - z) over the observed coordinates of z.
LogTarget posterior_target(const core::ForwardModel& model, const core::NoiseModel& noise, const Prior0& prior0,
                           const core::Measurement& record);

/// Runs one posterior chain per measurement record and merges the last
/// `per_measurement` retained draws of each into K = M * per_measurement
/// atoms. cfg.thin is replaced by floor((T - B) / per_measurement). Each
/// chain is seeded from (cfg.seed, record id), so the result does not depend
/// on the thread count. Chains are returned through `chains` when given.
core::AtomSet build_atom_set(const core::ForwardModel& model, const core::NoiseModel& noise, const Prior0& prior0,
                             const core::MeasurementSet& data, std::size_t per_measurement, const SamplerConfig& cfg,
                             std::vector<Chain>* chains = nullptr);

}  // namespace ebprior::mcmc
