#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ebprior/core/likelihood.hpp"
#include "ebprior/random.hpp"

namespace ebprior::estimators {

/// A Monte-Carlo estimate with its standard error and sample count.
struct McEstimate {
  double value;
  double std_error;
  std::size_t samples;
};

/// J points z_j ~ rho_Z(. | W = w): pick atom k with probability w_k, add a
/// noise draw to phi(x_k). Returned row-major (J x n).
std::vector<double> sample_mixture(const core::AtomImages& images, const core::NoiseModel& noise,
                                   const core::WeightVector& w, std::size_t count, Rng& rng);

/// Integration rule over measurement space used for H_Z and its gradient:
///   integral g(z) dz ~ sum_j exp(log_weight_j) g(z_j),
/// where `kernel` holds rho_Z(z_j | X = x_k).
struct EntropyRule {
  const core::LikelihoodMatrix* kernel;
  std::vector<double> log_weight;
};

/// Importance weights 1 / (J rho_Z(z_j | W = w_sampling)) for points drawn
/// from the w_sampling mixture.
EntropyRule importance_rule(const core::LikelihoodMatrix& kernel, const core::WeightVector& w_sampling);
EntropyRule importance_rule(core::LikelihoodMatrix&&, const core::WeightVector&) = delete;  // rule keeps a pointer

/// Uniform quadrature with the given cell volume (exact-integration stand-in).
EntropyRule quadrature_rule(const core::LikelihoodMatrix& kernel, double cell_volume);
EntropyRule quadrature_rule(core::LikelihoodMatrix&&, double) = delete;

/// H_Z(w) = -integral rho_Z(z | W=w) log rho_Z(z | W=w) dz under the rule.
double z_entropy(const EntropyRule& rule, std::span<const double> w);

/// Self-sampled estimate -(1/J) sum_j log rho_Z(z_j | W = w), where the rows
/// of L are points drawn from the w mixture.
McEstimate z_entropy(const core::LikelihoodMatrix& L, const core::WeightVector& w);

}  // namespace ebprior::estimators
