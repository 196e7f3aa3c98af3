#include "ebprior/core/atoms.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "ebprior/error.hpp"

namespace ebprior::core {

std::string to_string(AtomProvenance p) {
  switch (p) {
    case AtomProvenance::grid: return "grid";
    case AtomProvenance::posterior_merge: return "posterior-merge";
    case AtomProvenance::file: return "file";
  }
  return "unknown";
}

AtomSet::AtomSet(std::size_t dim, std::vector<double> coords, AtomProvenance provenance)
    : dim_(dim), coords_(std::move(coords)), provenance_(provenance) {
  if (dim_ == 0) throw ValidationError("atom set: dimension must be positive");
  if (coords_.empty() || coords_.size() % dim_ != 0) {
    throw ValidationError(fmt::format("atom set: {} coordinates do not form atoms of dimension {}",
                                      coords_.size(), dim_));
  }
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (!std::isfinite(coords_[i])) {
      throw ValidationError(fmt::format("atom set: atom {} has a non-finite coordinate", i / dim_));
    }
  }
}

AtomSet AtomSet::grid_1d(double lo, double hi, std::size_t count) {
  if (count == 0) throw ValidationError("grid: atom count must be positive");
  if (!(hi >= lo)) throw ValidationError(fmt::format("grid: empty interval [{}, {}]", lo, hi));
  std::vector<double> x(count);
  if (count == 1) {
    x[0] = lo;
  } else {
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t k = 0; k < count; ++k) x[k] = lo + step * static_cast<double>(k);
    x.back() = hi;
  }
  return AtomSet(1, std::move(x), AtomProvenance::grid);
}

AtomSet AtomSet::permuted(std::span<const std::size_t> order) const {
  if (order.size() != size()) throw ValidationError("atom permutation: size mismatch");
  std::vector<double> out;
  out.reserve(coords_.size());
  for (std::size_t k : order) {
    const auto a = (*this)[k];
    out.insert(out.end(), a.begin(), a.end());
  }
  return AtomSet(dim_, std::move(out), provenance_);
}

WeightVector::WeightVector(std::vector<double> w) : w_(std::move(w)) {
  if (w_.empty()) throw ValidationError("weight vector: empty");
  double sum = 0.0;
  for (std::size_t k = 0; k < w_.size(); ++k) {
    if (!(w_[k] >= 0.0) || !std::isfinite(w_[k])) {
      throw ValidationError(fmt::format("weight vector: entry {} is {}, expected a finite nonnegative value", k, w_[k]));
    }
    sum += w_[k];
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw ValidationError(fmt::format("weight vector: entries sum to {:.17g}, expected 1", sum));
  }
}

WeightVector WeightVector::uniform(std::size_t k) {
  if (k == 0) throw ValidationError("weight vector: empty");
  return WeightVector(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

WeightVector WeightVector::unit(std::size_t k, std::size_t index) {
  if (index >= k) throw ValidationError("weight vector: unit index out of range");
  std::vector<double> w(k, 0.0);
  w[index] = 1.0;
  return WeightVector(std::move(w));
}

WeightVector WeightVector::normalized(std::vector<double> w) {
  double sum = 0.0;
  for (double v : w) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("weight vector: negative or non-finite entry");
    sum += v;
  }
  if (!(sum > 0.0)) throw NumericalError("weight vector: total mass is zero");
  for (double& v : w) v /= sum;
  return WeightVector(std::move(w));
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("l1 distance: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return acc;
}

}  // namespace ebprior::core
