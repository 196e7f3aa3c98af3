#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ebprior/core/csv.hpp"
#include "ebprior/core/measurements.hpp"
#include "ebprior/core/model.hpp"

namespace ebprior::toy {

struct PopulationParams {
  double k1 = 15.0;  // N/m, box1 nominal stiffness
  double k2 = 30.0;  // N/m, box2
  std::size_t n1 = 150;
  std::size_t n2 = 150;
  double relative_std = 0.15;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SpringPopulation {
  std::vector<std::string> id;
  std::vector<std::string> box;   // "box1" or "box2"
  std::vector<double> stiffness;  // K_true > 0

  std::size_t size() const { return stiffness.size(); }
};

/// n1 springs around k1 then n2 around k2, each N(K, (relative_std K)^2);
/// non-positive draws are redrawn.
SpringPopulation generate_population(const PopulationParams& params);

/// `id,box,K_true`
std::string population_to_csv(const SpringPopulation& pop);
SpringPopulation population_from_csv(const core::CsvTable& table);
SpringPopulation read_population(const std::filesystem::path& path);

/// One noisy measurement per spring, in meters. With `groups` the box label
/// becomes the measurement group.
core::MeasurementSet measure_population(const SpringPopulation& pop, const core::ForwardModel& model, double sigma,
                                        std::uint64_t seed, bool groups = false);

/// Multiplies every observed value by `factor` (cm <-> m at the file boundary).
core::MeasurementSet rescaled(const core::MeasurementSet& data, double factor);

}  // namespace ebprior::toy
