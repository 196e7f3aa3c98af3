#include "ebprior/estimators/npmle.hpp"

#include <cmath>

#include <fmt/format.h>

#include "ebprior/error.hpp"

namespace ebprior::estimators {

using core::LikelihoodMatrix;
using core::WeightVector;

WeightVector npmle_step(const LikelihoodMatrix& L, const WeightVector& w, std::span<const double> measurement_weights) {
  const std::size_t M = L.rows();
  const std::size_t K = L.cols();
  if (w.size() != K) throw ValidationError(fmt::format("npmle: {} atoms but {} weights", K, w.size()));
  if (M == 0) throw ValidationError("npmle: no measurements");
  if (!measurement_weights.empty() && measurement_weights.size() != M) {
    throw ValidationError("npmle: measurement weight count does not match measurements");
  }
  std::vector<double> acc(K, 0.0);
  const double uniform = 1.0 / static_cast<double>(M);
  for (std::size_t m = 0; m < M; ++m) {
    const double c = measurement_weights.empty() ? uniform : measurement_weights[m];
    if (c == 0.0) continue;
    // L[m][k] / rho_m = scaled[m][k] * exp(row_max - log rho_m)
    const double factor = c * std::exp(L.row_log_max(m) - L.log_mixture(m, w.span()));
    const auto s = L.scaled_row(m);
    for (std::size_t k = 0; k < K; ++k) acc[k] += factor * s[k];
  }
  for (std::size_t k = 0; k < K; ++k) acc[k] *= w[k];
  return WeightVector::normalized(std::move(acc));
}

IterationTrace npmle_run(const LikelihoodMatrix& L, const WeightVector& w0, std::size_t max_iter, double tol) {
  if (!(tol >= 0.0)) throw ValidationError("npmle: tol must be nonnegative");
  const double M = static_cast<double>(L.rows());
  IterationTrace trace{{}, w0, Termination::max_iter};
  trace.records.push_back({0, M * core::log_likelihood_dd(L, w0), 0.0});
  for (std::size_t it = 1; it <= max_iter; ++it) {
    auto next = npmle_step(L, trace.final_weights);
    const double delta = core::l1_distance(next.span(), trace.final_weights.span());
    trace.final_weights = std::move(next);
    trace.records.push_back({it, M * core::log_likelihood_dd(L, trace.final_weights), delta});
    if (delta < tol) {
      trace.reason = Termination::tol;
      break;
    }
  }
  return trace;
}

}  // namespace ebprior::estimators
