#include "ebprior/estimators/mple.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "ebprior/error.hpp"
#include "ebprior/estimators/simplex.hpp"

namespace ebprior::estimators {

using core::LikelihoodMatrix;
using core::WeightVector;

void MpleConfig::validate() const {
  if (gamma && !(*gamma >= 0.0 && std::isfinite(*gamma))) {
    throw ValidationError(fmt::format("mple: gamma must be finite and >= 0, got {}", *gamma));
  }
  if (samples && *samples == 0) throw ValidationError("mple: samples (J) must be >= 1");
  if (!(step > 0.0)) throw ValidationError("mple: step must be positive");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw ValidationError("mple: backtrack must lie in (0, 1)");
  if (!(tol >= 0.0)) throw ValidationError("mple: tol must be nonnegative");
}

double mple_objective(const LikelihoodMatrix* data, const EntropyRule* entropy, std::span<const double> w,
                      double gamma) {
  double value = 0.0;
  if (data != nullptr) {
    for (double lr : core::log_marginal_likelihood(*data, w)) value += lr;
  }
  if (gamma != 0.0) {
    if (entropy == nullptr) throw ValidationError("mple: entropy rule required when gamma > 0");
    value += gamma * z_entropy(*entropy, w);
  }
  return value;
}

std::vector<double> mple_gradient(const LikelihoodMatrix* data, const EntropyRule* entropy, std::span<const double> w,
                                  double gamma) {
  const std::size_t K = w.size();
  std::vector<double> g(K, 0.0);
  if (data != nullptr) {
    if (data->cols() != K) throw ValidationError("mple gradient: atom count mismatch");
    const auto lr = core::log_marginal_likelihood(*data, w);
    for (std::size_t m = 0; m < data->rows(); ++m) {
      const double factor = std::exp(data->row_log_max(m) - lr[m]);
      if (!std::isfinite(factor)) throw NumericalError("mple gradient: zero marginal likelihood at a data point");
      const auto s = data->scaled_row(m);
      for (std::size_t k = 0; k < K; ++k) g[k] += factor * s[k];
    }
  }
  if (gamma != 0.0) {
    if (entropy == nullptr) throw ValidationError("mple: entropy rule required when gamma > 0");
    const auto& kernel = *entropy->kernel;
    if (kernel.cols() != K) throw ValidationError("mple gradient: atom count mismatch");
    const auto lr = core::log_marginal_likelihood(kernel, w);
    std::vector<double> integral(K, 0.0);
    for (std::size_t j = 0; j < kernel.rows(); ++j) {
      const double a = std::exp(entropy->log_weight[j] + kernel.row_log_max(j)) * lr[j];
      const auto s = kernel.scaled_row(j);
      for (std::size_t k = 0; k < K; ++k) integral[k] += a * s[k];
    }
    for (std::size_t k = 0; k < K; ++k) g[k] -= gamma * integral[k] + gamma;
  }
  return g;
}

std::vector<double> mple_gradient(const LikelihoodMatrix& data, const LikelihoodMatrix& entropy_points,
                                  const WeightVector& w, double gamma) {
  if (gamma == 0.0) return mple_gradient(&data, nullptr, w.span(), 0.0);
  const auto rule = importance_rule(entropy_points, w);
  return mple_gradient(&data, &rule, w.span(), gamma);
}

namespace {

IterationTrace projected_ascent(const LikelihoodMatrix* data, const core::AtomImages& images,
                                const core::NoiseModel& noise, const WeightVector& w0, const MpleConfig& cfg,
                                double gamma, Rng rng) {
  cfg.validate();
  const std::size_t K = w0.size();
  if (images.size() != K) throw ValidationError(fmt::format("mple: {} atoms but {} weights", images.size(), K));
  if (data != nullptr && data->cols() != K) {
    throw ValidationError(fmt::format("mple: likelihood matrix has {} atoms but {} weights", data->cols(), K));
  }
  const std::size_t J = cfg.sample_count(K);
  const bool with_entropy = gamma != 0.0;

  IterationTrace trace{{}, w0, Termination::max_iter};
  double step = cfg.step;
  for (std::size_t it = 0;; ++it) {
    const WeightVector& w = trace.final_weights;
    std::optional<LikelihoodMatrix> kernel;
    std::optional<EntropyRule> rule;
    if (with_entropy) {
      // defensive mixture: atoms with little weight still get sample points
      std::vector<double> mix(K);
      for (std::size_t k = 0; k < K; ++k) mix[k] = 0.5 * w[k] + 0.5 / static_cast<double>(K);
      const WeightVector sampling(std::move(mix));
      const auto points = sample_mixture(images, noise, sampling, J, rng);
      kernel.emplace(core::likelihood_matrix(images, noise, points));
      rule.emplace(importance_rule(*kernel, sampling));
    }
    const EntropyRule* entropy = rule ? &*rule : nullptr;
    const double current = mple_objective(data, entropy, w.span(), gamma);
    if (it == 0) trace.records.push_back({0, current, 0.0});
    if (it == cfg.max_iter) {
      trace.reason = Termination::max_iter;
      break;
    }

    const auto grad = mple_gradient(data, entropy, w.span(), gamma);
    std::vector<double> trial(K);
    std::optional<WeightVector> accepted;
    double accepted_value = current;
    double t = step;
    for (int attempt = 0; attempt < 200 && t > 0.0; ++attempt, t *= cfg.backtrack) {
      for (std::size_t k = 0; k < K; ++k) trial[k] = w[k] + t * grad[k];
      auto candidate = simplex_project(trial);
      if (candidate.values() == w.values()) break;
      double slope = 0.0;
      for (std::size_t k = 0; k < K; ++k) slope += grad[k] * (candidate[k] - w[k]);
      const double value = mple_objective(data, entropy, candidate.span(), gamma);
      if (value >= current + MpleConfig::kArmijo * slope) {
        accepted = std::move(candidate);
        accepted_value = value;
        break;
      }
    }
    if (!accepted) {
      // Stationary for this sample: no ascent direction survives projection.
      trace.records.push_back({it + 1, current, 0.0});
      trace.reason = Termination::tol;
      break;
    }
    const double delta = core::l1_distance(accepted->span(), w.span());
    trace.final_weights = std::move(*accepted);
    trace.records.push_back({it + 1, accepted_value, delta});
    step = t;
    if (delta < cfg.tol) {
      trace.reason = Termination::tol;
      break;
    }
  }
  return trace;
}

}  // namespace

IterationTrace mple_run(const LikelihoodMatrix& data, const core::AtomImages& images, const core::NoiseModel& noise,
                        const WeightVector& w0, const MpleConfig& cfg, std::uint64_t seed) {
  if (!cfg.gamma) throw ValidationError("mple: missing required parameter 'gamma'");
  return projected_ascent(&data, images, noise, w0, cfg, *cfg.gamma, make_stream(seed, "mple"));
}

IterationTrace mple_run(const LikelihoodMatrix& data, const core::AtomSet& atoms, const core::ForwardModel& model,
                        const core::NoiseModel& noise, const WeightVector& w0, const MpleConfig& cfg,
                        std::uint64_t seed) {
  return mple_run(data, core::evaluate_model(model, atoms), noise, w0, cfg, seed);
}

IterationTrace reference_prior_run(const core::AtomImages& images, const core::NoiseModel& noise,
                                   const WeightVector& w0, const MpleConfig& cfg, std::uint64_t seed) {
  const double gamma = cfg.gamma.value_or(1.0);
  if (!(gamma > 0.0)) throw ValidationError("reference prior: gamma must be positive");
  return projected_ascent(nullptr, images, noise, w0, cfg, gamma, make_stream(seed, "refprior"));
}

IterationTrace reference_prior_run(const core::AtomSet& atoms, const core::ForwardModel& model,
                                   const core::NoiseModel& noise, const WeightVector& w0, const MpleConfig& cfg,
                                   std::uint64_t seed) {
  return reference_prior_run(core::evaluate_model(model, atoms), noise, w0, cfg, seed);
}

}  // namespace ebprior::estimators
