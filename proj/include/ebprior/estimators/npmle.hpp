#pragma once

#include <cstddef>
#include <span>

#include "ebprior/core/likelihood.hpp"
#include "ebprior/estimators/trace.hpp"

namespace ebprior::estimators {

struct NpmleConfig {
  std::size_t max_iter = 500;
  double tol = 1e-9;
};

/// One self-consistency (EM) step
///   w'_k = w_k sum_m c_m L[m][k] / rho_Z(z_m | W = w),
/// with c_m = 1/M unless explicit measurement weights (summing to one) are given.
core::WeightVector npmle_step(const core::LikelihoodMatrix& L, const core::WeightVector& w,
                              std::span<const double> measurement_weights = {});

/// Iterates npmle_step until ||w_{n+1} - w_n||_1 < tol or max_iter steps.
/// The trace objective is M * L_dd.
IterationTrace npmle_run(const core::LikelihoodMatrix& L, const core::WeightVector& w0, std::size_t max_iter,
                         double tol);
inline IterationTrace npmle_run(const core::LikelihoodMatrix& L, const core::WeightVector& w0,
                                const NpmleConfig& cfg) {
  return npmle_run(L, w0, cfg.max_iter, cfg.tol);
}

}  // namespace ebprior::estimators
