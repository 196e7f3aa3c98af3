#include "ebprior/core/measurements.hpp"

#include <cmath>
#include <unordered_set>

#include <fmt/format.h>

#include "ebprior/error.hpp"

namespace ebprior::core {

std::size_t Measurement::observed_count() const {
  std::size_t n = 0;
  for (bool b : mask) n += b ? 1 : 0;
  return n;
}

MeasurementSet::MeasurementSet(std::vector<Measurement> records) : records_(std::move(records)) {
  if (records_.empty()) throw ValidationError("measurement set: no records");
  dim_ = records_.front().z.size();
  if (dim_ == 0) throw ValidationError("measurement set: zero-dimensional records");
  std::unordered_set<std::string> ids;
  for (auto& r : records_) {
    if (r.z.size() != dim_) {
      throw ValidationError(fmt::format("measurement '{}': {} coordinates, expected {}", r.id, r.z.size(), dim_));
    }
    if (r.mask.empty()) r.mask.assign(dim_, true);
    if (r.mask.size() != dim_) {
      throw ValidationError(fmt::format("measurement '{}': mask has {} entries, expected {}", r.id, r.mask.size(), dim_));
    }
    if (!ids.insert(r.id).second) throw ValidationError(fmt::format("measurement set: duplicate id '{}'", r.id));
    for (std::size_t i = 0; i < dim_; ++i) {
      if (r.mask[i] && !std::isfinite(r.z[i])) {
        throw ValidationError(fmt::format("measurement '{}': observed coordinate {} is not finite", r.id, i));
      }
    }
  }
}

MeasurementSet MeasurementSet::from_points(std::size_t dim, std::span<const double> points) {
  if (dim == 0 || points.size() % dim != 0) throw ValidationError("measurement points: bad shape");
  std::vector<Measurement> records;
  records.reserve(points.size() / dim);
  for (std::size_t m = 0; m * dim < points.size(); ++m) {
    records.push_back({std::to_string(m), std::nullopt,
                       std::vector<double>(points.begin() + m * dim, points.begin() + (m + 1) * dim),
                       Mask(dim, true)});
  }
  return MeasurementSet(std::move(records));
}

bool MeasurementSet::any_masked() const {
  for (const auto& r : records_) {
    if (r.observed_count() != dim_) return true;
  }
  return false;
}

std::map<std::string, MeasurementSet> MeasurementSet::split_by_group() const {
  std::map<std::string, std::vector<Measurement>> parts;
  for (const auto& r : records_) parts[r.group.value_or("")].push_back(r);
  std::map<std::string, MeasurementSet> out;
  for (auto& [label, recs] : parts) out.emplace(label, MeasurementSet(std::move(recs)));
  return out;
}

QuadratureGrid uniform_grid(std::span<const double> lo, std::span<const double> hi,
                            std::span<const std::size_t> counts) {
  const std::size_t n = lo.size();
  if (n == 0 || hi.size() != n || counts.size() != n) throw ValidationError("quadrature grid: dimension mismatch");
  std::size_t total = 1;
  double volume = 1.0;
  std::vector<double> step(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (counts[i] == 0) throw ValidationError("quadrature grid: empty grid");
    if (!(hi[i] > lo[i])) throw ValidationError("quadrature grid: empty interval");
    step[i] = (hi[i] - lo[i]) / static_cast<double>(counts[i]);
    volume *= step[i];
    total *= counts[i];
  }
  // cell midpoints
  std::vector<double> points(total * n);
  std::vector<std::size_t> idx(n, 0);
  for (std::size_t p = 0; p < total; ++p) {
    for (std::size_t i = 0; i < n; ++i) points[p * n + i] = lo[i] + (static_cast<double>(idx[i]) + 0.5) * step[i];
    for (std::size_t i = n; i-- > 0;) {
      if (++idx[i] < counts[i]) break;
      idx[i] = 0;
    }
  }
  return {MeasurementSet::from_points(n, points), volume};
}

}  // namespace ebprior::core
