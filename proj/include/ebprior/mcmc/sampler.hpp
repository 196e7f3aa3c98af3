#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ebprior::mcmc {

/// Unnormalized log density. Returning -inf (or any non-finite value) marks
/// a point outside the support; proposals there are rejected.
using LogTarget = std::function<double(std::span<const double>)>;

struct SamplerConfig {
  std::size_t steps = 10000;            // T
  std::optional<std::size_t> burn_in;   // B, defaults to T/2
  std::size_t thin = 1;                 // s
  double proposal_scale = 0.01;         // random-walk covariance is scale^2/d * I
  bool adaptive = false;
  double beta = 0.05;                   // weight of the fixed component once adapted
  std::uint64_t seed = 0;

  void validate() const;
  std::size_t burn() const { return burn_in.value_or(steps / 2); }
  /// floor((T - B) / s)
  std::size_t retained() const;
};

struct Chain {
  std::size_t dim = 0;
  std::vector<double> samples;       // retained states, row-major
  std::vector<double> log_target;    // per retained state
  std::vector<std::size_t> step;     // sweep index of each retained state
  std::vector<bool> accepted;        // whether that sweep's proposal was accepted
  std::size_t acceptance_count = 0;  // over all T sweeps
  std::uint64_t seed = 0;

  std::size_t size() const { return log_target.size(); }
  std::span<const double> operator[](std::size_t i) const { return {samples.data() + i * dim, dim}; }
  double acceptance_rate(std::size_t steps) const {
    return steps == 0 ? 0.0 : static_cast<double>(acceptance_count) / static_cast<double>(steps);
  }
};

/// One proposal as seen by the accept/reject step.
struct ProposalRecord {
  std::size_t step;
  double log_ratio;  // log target(proposal) - log target(current)
  bool accepted;
};
using ProposalObserver = std::function<void(const ProposalRecord&)>;

Chain metropolis_hastings(const LogTarget& log_target, std::span<const double> x_init, const SamplerConfig& cfg,
                          const ProposalObserver& observe = {});

/// Mixture of an adapted Gaussian random walk with covariance
/// 2.38^2/d * (Sigma_emp + 1e-10 I) and the fixed small one of
/// metropolis_hastings, weighted (1 - beta, beta). Until 2d states have been
/// visited only the fixed component is used.
Chain adaptive_mixture_metropolis(const LogTarget& log_target, std::span<const double> x_init,
                                  const SamplerConfig& cfg, const ProposalObserver& observe = {});

/// Dispatches on cfg.adaptive.
Chain run_sampler(const LogTarget& log_target, std::span<const double> x_init, const SamplerConfig& cfg);

/// Potential scale reduction factor per coordinate. Chains that agree exactly
/// give 1; constant chains at different points give +inf.
std::vector<double> gelman_rubin(const std::vector<Chain>& chains);

/// `step,x_0..x_{d-1},log_target,accepted`
std::string chain_to_csv(const Chain& chain);

}  // namespace ebprior::mcmc
