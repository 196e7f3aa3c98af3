#include "ebprior/mcmc/atoms.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "ebprior/error.hpp"
#include "ebprior/parallel.hpp"

namespace ebprior::mcmc {

namespace {
constexpr int kInitAttempts = 100;
}

LogTarget posterior_target(const core::ForwardModel& model, const core::NoiseModel& noise, const Prior0& prior0,
                           const core::Measurement& record) {
  return [&model, &noise, &prior0, &record](std::span<const double> x) {
    const double lp = prior0.log_density(x);
    if (!std::isfinite(lp)) return lp;
    std::vector<double> r(model.dim_obs());
    model.eval(x, r);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = record.mask[i] ? r[i] - record.z[i] : 0.0;
    for (double v : r) {
      if (!std::isfinite(v)) return -std::numeric_limits<double>::infinity();
    }
    return lp + noise.log_density(r, &record.mask);
  };
}

core::AtomSet build_atom_set(const core::ForwardModel& model, const core::NoiseModel& noise, const Prior0& prior0,
                             const core::MeasurementSet& data, std::size_t per_measurement, const SamplerConfig& cfg,
                             std::vector<Chain>* chains) {
  if (per_measurement == 0) throw ValidationError("build_atom_set: atoms per measurement must be >= 1");
  if (prior0.dim != model.dim_param()) throw ValidationError("build_atom_set: prior and model dimensions differ");
  if (data.dim() != model.dim_obs() || noise.dim() != model.dim_obs()) {
    throw ValidationError("build_atom_set: measurement, noise and model dimensions differ");
  }
  SamplerConfig run_cfg = cfg;
  run_cfg.thin = 1;
  run_cfg.validate();
  const std::size_t span = run_cfg.steps - run_cfg.burn();
  if (span < per_measurement) {
    throw ValidationError(fmt::format("build_atom_set: {} post burn-in steps cannot give {} samples per measurement",
                                      span, per_measurement));
  }
  run_cfg.thin = span / per_measurement;

  const std::size_t d = model.dim_param();
  std::vector<Chain> out(data.size());
  parallel_for(data.size(), [&](std::size_t m) {
    const auto& rec = data[m];
    auto rng = make_stream(cfg.seed, "chain:" + rec.id);
    const auto target = posterior_target(model, noise, prior0, rec);
    std::vector<double> x0(d);
    bool ok = false;
    for (int attempt = 0; attempt < kInitAttempts && !ok; ++attempt) {
      prior0.sample(rng, x0);
      ok = std::isfinite(target(x0));
    }
    if (!ok) {
      throw NumericalError(fmt::format("build_atom_set: chain for record '{}' found no start point with finite target",
                                       rec.id));
    }
    SamplerConfig chain_cfg = run_cfg;
    chain_cfg.seed = rng();
    out[m] = run_sampler(target, x0, chain_cfg);
  });

  std::vector<double> coords;
  coords.reserve(data.size() * per_measurement * d);
  for (const auto& c : out) {
    const std::size_t first = c.size() - per_measurement;
    coords.insert(coords.end(), c.samples.begin() + static_cast<std::ptrdiff_t>(first * d), c.samples.end());
  }
  if (chains) *chains = std::move(out);
  return core::AtomSet(d, std::move(coords), core::AtomProvenance::posterior_merge);
}

}  // namespace ebprior::mcmc
