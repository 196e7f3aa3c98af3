#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ebprior::core {

enum class AtomProvenance { grid, posterior_merge, file };

std::string to_string(AtomProvenance p);

/// Discretization nodes x_1..x_K in R^d, stored row-major.
class AtomSet {
 public:
  AtomSet(std::size_t dim, std::vector<double> coords, AtomProvenance provenance);

  /// K equidistant atoms on [lo, hi] (1-D). K = 1 places the atom at lo.
  static AtomSet grid_1d(double lo, double hi, std::size_t count);

  std::size_t size() const { return coords_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  AtomProvenance provenance() const { return provenance_; }

  std::span<const double> operator[](std::size_t k) const {
    return {coords_.data() + k * dim_, dim_};
  }
  const std::vector<double>& coords() const { return coords_; }

  AtomSet permuted(std::span<const std::size_t> order) const;

 private:
  std::size_t dim_;
  std::vector<double> coords_;
  AtomProvenance provenance_;
};

/// Point of the probability simplex: w_k >= 0, sum w_k = 1 (within 1e-12).
class WeightVector {
 public:
  static constexpr double kSumTolerance = 1e-12;

  /// Validates without rescaling.
  explicit WeightVector(std::vector<double> w);

  static WeightVector uniform(std::size_t k);
  static WeightVector unit(std::size_t k, std::size_t index);
  /// Divides a nonnegative vector with positive sum by its sum.
  static WeightVector normalized(std::vector<double> w);

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t k) const { return w_[k]; }
  const std::vector<double>& values() const { return w_; }
  std::span<const double> span() const { return w_; }

  auto begin() const { return w_.begin(); }
  auto end() const { return w_.end(); }

 private:
  std::vector<double> w_;
};

double l1_distance(std::span<const double> a, std::span<const double> b);

}  // namespace ebprior::core
