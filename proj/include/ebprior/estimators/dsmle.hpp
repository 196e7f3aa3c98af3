#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "ebprior/core/measurements.hpp"
#include "ebprior/core/model.hpp"

namespace ebprior::estimators {

struct DsmleConfig {
  std::optional<double> bandwidth;  // kernel std h; defaults to the noise sigma per coordinate
  std::size_t samples = 10;         // augmentation draws S per measurement
  std::uint64_t seed = 0;

  void validate() const;
};

struct SmoothedProblem {
  core::MeasurementSet data;  // M * S augmented points
  core::NoiseModel noise;     // sigma_i -> sqrt(sigma_i^2 + h_i^2)
};

/// Draws S points per record from the Gaussian kernel density estimate around
/// it and widens the Gaussian noise by the same kernel. Only the built-in
/// Gaussian noise has the closed-form convolution this needs.
SmoothedProblem dsmle_prepare(const core::MeasurementSet& data, const core::NoiseModel& noise,
                              const DsmleConfig& cfg);

}  // namespace ebprior::estimators
