#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ebprior/core/likelihood.hpp"
#include "ebprior/estimators/entropy.hpp"
#include "ebprior/estimators/trace.hpp"

namespace ebprior::estimators {

struct MpleConfig {
  std::optional<double> gamma;          // penalty weight; required for MPLE
  std::optional<std::size_t> samples;   // importance points J per iteration; default 64 K
  double step = 1.0;                    // first trial step
  double backtrack = 0.5;
  std::size_t max_iter = 500;
  double tol = 1e-9;

  static constexpr double kArmijo = 1e-4;

  void validate() const;
  std::size_t sample_count(std::size_t atoms) const { return samples.value_or(64 * atoms); }
};

/// Penalized objective M L_dd(w) + gamma H_Z(w). `data` may be null (no
/// likelihood term); `entropy` may be null when gamma is 0.
double mple_objective(const core::LikelihoodMatrix* data, const EntropyRule* entropy, std::span<const double> w,
                      double gamma);

/// Gradient of the penalized objective:
///   sum_m L[m][k]/rho_m - gamma I_k - gamma,
///   I_k = integral rho_Z(z | X = x_k) log rho_Z(z | W = w) dz under `entropy`.
std::vector<double> mple_gradient(const core::LikelihoodMatrix* data, const EntropyRule* entropy,
                                  std::span<const double> w, double gamma);

/// Same gradient with importance points L_ent drawn from the current mixture w.
std::vector<double> mple_gradient(const core::LikelihoodMatrix& data, const core::LikelihoodMatrix& entropy_points,
                                  const core::WeightVector& w, double gamma);

/// Projected gradient ascent w <- P(w + t grad). Each iteration draws a fresh
/// importance sample from (w + uniform)/2 and keeps it fixed while the step t
/// is shrunk until the Armijo condition holds. The next iteration starts from
/// the accepted step, so steps never grow.
IterationTrace mple_run(const core::LikelihoodMatrix& data, const core::AtomImages& images,
                        const core::NoiseModel& noise, const core::WeightVector& w0, const MpleConfig& cfg,
                        std::uint64_t seed);
IterationTrace mple_run(const core::LikelihoodMatrix& data, const core::AtomSet& atoms,
                        const core::ForwardModel& model, const core::NoiseModel& noise, const core::WeightVector& w0,
                        const MpleConfig& cfg, std::uint64_t seed);

/// Maximizes H_Z alone (the data term is switched off); gamma in cfg only
/// rescales the objective and defaults to 1.
IterationTrace reference_prior_run(const core::AtomImages& images, const core::NoiseModel& noise,
                                   const core::WeightVector& w0, const MpleConfig& cfg, std::uint64_t seed);
IterationTrace reference_prior_run(const core::AtomSet& atoms, const core::ForwardModel& model,
                                   const core::NoiseModel& noise, const core::WeightVector& w0, const MpleConfig& cfg,
                                   std::uint64_t seed);

}  // namespace ebprior::estimators
