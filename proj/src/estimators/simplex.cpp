#include "ebprior/estimators/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "ebprior/error.hpp"

namespace ebprior::estimators {

core::WeightVector simplex_project(std::span<const double> v) {
  if (v.empty()) throw ValidationError("simplex projection: empty vector");
  for (double x : v) {
    if (!std::isfinite(x)) throw ValidationError("simplex projection: non-finite input");
  }
  std::vector<double> u(v.begin(), v.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumulative += u[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) theta = candidate;
  }
  std::vector<double> w(v.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) sum += (w[k] = std::max(v[k] - theta, 0.0));
  // Remove rounding drift; the correction is O(K eps).
  if (sum != 1.0) {
    for (double& x : w) x /= sum;
  }
  return core::WeightVector(std::move(w));
}

}  // namespace ebprior::estimators
