#include "ebprior/estimators/dsmle.hpp"

#include <cmath>

#include <fmt/format.h>

#include "ebprior/error.hpp"
#include "ebprior/random.hpp"

namespace ebprior::estimators {

void DsmleConfig::validate() const {
  if (bandwidth && !(*bandwidth >= 0.0 && std::isfinite(*bandwidth))) {
    throw ValidationError(fmt::format("dsmle: bandwidth must be finite and >= 0, got {}", *bandwidth));
  }
  if (samples == 0) throw ValidationError("dsmle: samples must be >= 1");
}

SmoothedProblem dsmle_prepare(const core::MeasurementSet& data, const core::NoiseModel& noise,
                              const DsmleConfig& cfg) {
  cfg.validate();
  if (!noise.is_gaussian()) {
    throw ValidationError("dsmle: unsupported combination, kernel smoothing needs the built-in gaussian noise");
  }
  const std::size_t n = data.dim();
  if (noise.dim() != n) throw ValidationError("dsmle: noise and measurement dimensions differ");
  const auto sigma = noise.gaussian_sigma();
  std::vector<double> h(n), smoothed(n);
  for (std::size_t i = 0; i < n; ++i) {
    h[i] = cfg.bandwidth.value_or(sigma[i]);
    smoothed[i] = std::sqrt(sigma[i] * sigma[i] + h[i] * h[i]);
  }

  auto rng = make_stream(cfg.seed, "dsmle");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<core::Measurement> out;
  out.reserve(data.size() * cfg.samples);
  for (const auto& rec : data.records()) {
    for (std::size_t s = 0; s < cfg.samples; ++s) {
      core::Measurement aug{fmt::format("{}#{}", rec.id, s), rec.group, rec.z, rec.mask};
      for (std::size_t i = 0; i < n; ++i) {
        if (rec.mask[i] && h[i] > 0.0) aug.z[i] += h[i] * normal(rng);
      }
      out.push_back(std::move(aug));
    }
  }
  const bool unchanged = std::all_of(h.begin(), h.end(), [](double v) { return v == 0.0; });
  return {core::MeasurementSet(std::move(out)), unchanged ? noise : core::NoiseModel::gaussian(smoothed)};
}

}  // namespace ebprior::estimators
