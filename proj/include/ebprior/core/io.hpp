#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "ebprior/core/atoms.hpp"
#include "ebprior/core/csv.hpp"
#include "ebprior/core/measurements.hpp"

namespace ebprior::core {

/// Columns: id, group (optional), z_0..z_{n-1}, mask_0..mask_{n-1} (optional,
/// 0/1). Unobserved values may be empty or "nan".
MeasurementSet measurements_from_csv(const CsvTable& table);
MeasurementSet read_measurements(const std::filesystem::path& path);
std::string measurements_to_csv(const MeasurementSet& data);

struct WeightedAtoms {
  AtomSet atoms;
  std::optional<WeightVector> weights;
};

/// Columns x_0..x_{d-1} and an optional w.
WeightedAtoms weighted_atoms_from_csv(const CsvTable& table);
WeightedAtoms read_weighted_atoms(const std::filesystem::path& path);
std::string weighted_atoms_to_csv(const AtomSet& atoms, const WeightVector& w);

}  // namespace ebprior::core
