#include "ebprior/estimators/entropy.hpp"

#include <cmath>

#include "ebprior/error.hpp"

namespace ebprior::estimators {

std::vector<double> sample_mixture(const core::AtomImages& images, const core::NoiseModel& noise,
                                   const core::WeightVector& w, std::size_t count, Rng& rng) {
  if (images.size() != w.size()) throw ValidationError("mixture sample: atom count mismatch");
  const std::size_t n = images.dim_obs;
  std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
  std::vector<double> out(count * n);
  for (std::size_t j = 0; j < count; ++j) {
    const auto y = images[pick(rng)];
    std::span<double> z(out.data() + j * n, n);
    noise.sample(rng, z);
    for (std::size_t i = 0; i < n; ++i) z[i] += y[i];
  }
  return out;
}

EntropyRule importance_rule(const core::LikelihoodMatrix& kernel, const core::WeightVector& w_sampling) {
  if (kernel.rows() == 0) throw ValidationError("entropy: no sample points (J = 0)");
  const auto lr = core::log_marginal_likelihood(kernel, w_sampling.span());
  const double log_j = std::log(static_cast<double>(kernel.rows()));
  EntropyRule rule{&kernel, std::vector<double>(kernel.rows())};
  for (std::size_t j = 0; j < lr.size(); ++j) rule.log_weight[j] = -log_j - lr[j];
  return rule;
}

EntropyRule quadrature_rule(const core::LikelihoodMatrix& kernel, double cell_volume) {
  if (kernel.rows() == 0) throw ValidationError("entropy: empty quadrature grid");
  if (!(cell_volume > 0.0)) throw ValidationError("entropy: cell volume must be positive");
  return {&kernel, std::vector<double>(kernel.rows(), std::log(cell_volume))};
}

double z_entropy(const EntropyRule& rule, std::span<const double> w) {
  const auto lr = core::log_marginal_likelihood(*rule.kernel, w);
  double acc = 0.0;
  for (std::size_t j = 0; j < lr.size(); ++j) acc -= std::exp(rule.log_weight[j] + lr[j]) * lr[j];
  return acc;
}

McEstimate z_entropy(const core::LikelihoodMatrix& L, const core::WeightVector& w) {
  const std::size_t J = L.rows();
  if (J == 0) throw ValidationError("entropy: no sample points (J = 0)");
  const auto lr = core::log_marginal_likelihood(L, w.span());
  double mean = 0.0;
  for (double v : lr) mean -= v;
  mean /= static_cast<double>(J);
  double ss = 0.0;
  for (double v : lr) ss += (-v - mean) * (-v - mean);
  const double se = J > 1 ? std::sqrt(ss / static_cast<double>(J - 1) / static_cast<double>(J)) : 0.0;
  return {mean, se, J};
}

}  // namespace ebprior::estimators
