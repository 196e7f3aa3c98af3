#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ebprior/core/model.hpp"

namespace ebprior::core {

struct Measurement {
  std::string id;
  std::optional<std::string> group;
  std::vector<double> z;
  Mask mask;  // true = observed

  std::size_t observed_count() const;
};

/// Population measurements z_1..z_M in R^n. Ids are unique, at least one
/// coordinate of each record is observed and observed values are finite.
class MeasurementSet {
 public:
  explicit MeasurementSet(std::vector<Measurement> records);

  /// Unlabelled, fully observed records with ids "0".."M-1".
  static MeasurementSet from_points(std::size_t dim, std::span<const double> points);

  std::size_t size() const { return records_.size(); }
  std::size_t dim() const { return dim_; }
  const Measurement& operator[](std::size_t m) const { return records_[m]; }
  const std::vector<Measurement>& records() const { return records_; }

  bool any_masked() const;

  /// Scenario (B) partition; records without a group go under "".
  /// Group order is lexicographic.
  std::map<std::string, MeasurementSet> split_by_group() const;

 private:
  std::size_t dim_;
  std::vector<Measurement> records_;
};

/// Uniform tensor grid in measurement space used as a quadrature rule.
struct QuadratureGrid {
  MeasurementSet points;
  double cell_volume;
};

QuadratureGrid uniform_grid(std::span<const double> lo, std::span<const double> hi,
                            std::span<const std::size_t> counts);

}  // namespace ebprior::core
