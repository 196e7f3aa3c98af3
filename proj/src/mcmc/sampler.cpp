#include "ebprior/mcmc/sampler.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <fmt/format.h>

#include "ebprior/core/csv.hpp"
#include "ebprior/error.hpp"
#include "ebprior/random.hpp"

namespace ebprior::mcmc {

void SamplerConfig::validate() const {
  if (steps == 0) throw ValidationError("mcmc: steps must be >= 1");
  if (burn() >= steps) throw ValidationError(fmt::format("mcmc: burn-in {} must be < steps {}", burn(), steps));
  if (thin == 0) throw ValidationError("mcmc: thinning must be >= 1");
  if (!(proposal_scale >= 0.0 && std::isfinite(proposal_scale))) {
    throw ValidationError("mcmc: proposal scale must be finite and >= 0");
  }
  if (!(beta >= 0.0 && beta <= 1.0)) throw ValidationError("mcmc: beta must lie in [0, 1]");
}

std::size_t SamplerConfig::retained() const { return (steps - burn()) / thin; }

namespace {

// Welford running mean / covariance of the visited states.
class RunningCovariance {
 public:
  explicit RunningCovariance(std::size_t d) : mean_(Eigen::VectorXd::Zero(d)), m2_(Eigen::MatrixXd::Zero(d, d)) {}

  void add(std::span<const double> x) {
    const Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
    ++n_;
    const Eigen::VectorXd delta = v - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_.noalias() += delta * (v - mean_).transpose();
  }
  std::size_t count() const { return n_; }
  Eigen::MatrixXd covariance() const { return m2_ / static_cast<double>(n_ - 1); }

 private:
  std::size_t n_ = 0;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd m2_;
};

Chain run(const LogTarget& log_target, std::span<const double> x_init, const SamplerConfig& cfg,
          const ProposalObserver& observe, bool adaptive) {
  cfg.validate();
  const std::size_t d = x_init.size();
  if (d == 0) throw ValidationError("mcmc: initial state must have dimension >= 1");
  std::vector<double> x(x_init.begin(), x_init.end());
  double lx = log_target(x);
  if (!std::isfinite(lx)) throw NumericalError("mcmc: log target is not finite at the initial state");

  Chain chain;
  chain.dim = d;
  chain.seed = cfg.seed;
  const std::size_t keep = cfg.retained();
  chain.samples.reserve(keep * d);
  chain.log_target.reserve(keep);

  auto rng = make_stream(cfg.seed, "mcmc");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double fixed_sd = cfg.proposal_scale / std::sqrt(static_cast<double>(d));
  const double adapt_factor = 2.38 * 2.38 / static_cast<double>(d);

  RunningCovariance cov(d);
  Eigen::MatrixXd factor;
  std::size_t factor_age = 0;
  if (adaptive) cov.add(x);

  std::vector<double> y(d), e(d);
  const std::size_t burn = cfg.burn();
  for (std::size_t i = 0; i < cfg.steps; ++i) {
    bool use_adapted = false;
    if (adaptive && cfg.beta < 1.0 && cov.count() >= 2 * d) {
      use_adapted = cfg.beta == 0.0 || unif(rng) >= cfg.beta;
    }
    for (double& v : e) v = normal(rng);
    if (use_adapted) {
      // the factor is refreshed every d sweeps; O(d^3) per refresh
      if (factor.size() == 0 || ++factor_age >= d) {
        Eigen::MatrixXd s = adapt_factor * cov.covariance();
        s.diagonal().array() += adapt_factor * 1e-10;
        Eigen::LLT<Eigen::MatrixXd> llt(s);
        if (llt.info() != Eigen::Success) throw NumericalError("mcmc: adapted covariance is not positive definite");
        factor = llt.matrixL();
        factor_age = 0;
      }
      const Eigen::Map<const Eigen::VectorXd> ev(e.data(), static_cast<Eigen::Index>(d));
      const Eigen::VectorXd step = factor.triangularView<Eigen::Lower>() * ev;
      for (std::size_t j = 0; j < d; ++j) y[j] = x[j] + step[static_cast<Eigen::Index>(j)];
    } else {
      for (std::size_t j = 0; j < d; ++j) y[j] = x[j] + fixed_sd * e[j];
    }

    const double ly = log_target(y);
    const double log_ratio = std::isfinite(ly) ? ly - lx : -std::numeric_limits<double>::infinity();
    const bool accept = std::log(unif(rng)) < log_ratio;
    if (accept) {
      x.swap(y);
      lx = ly;
      ++chain.acceptance_count;
    }
    if (observe) observe({i, log_ratio, accept});
    if (adaptive) cov.add(x);

    if (i >= burn && (i - burn + 1) % cfg.thin == 0) {
      chain.samples.insert(chain.samples.end(), x.begin(), x.end());
      chain.log_target.push_back(lx);
      chain.step.push_back(i);
      chain.accepted.push_back(accept);
    }
  }
  return chain;
}

}  // namespace

Chain metropolis_hastings(const LogTarget& log_target, std::span<const double> x_init, const SamplerConfig& cfg,
                          const ProposalObserver& observe) {
  return run(log_target, x_init, cfg, observe, false);
}

Chain adaptive_mixture_metropolis(const LogTarget& log_target, std::span<const double> x_init,
                                  const SamplerConfig& cfg, const ProposalObserver& observe) {
  return run(log_target, x_init, cfg, observe, true);
}

Chain run_sampler(const LogTarget& log_target, std::span<const double> x_init, const SamplerConfig& cfg) {
  return run(log_target, x_init, cfg, {}, cfg.adaptive);
}

std::vector<double> gelman_rubin(const std::vector<Chain>& chains) {
  if (chains.size() < 2) throw ValidationError("gelman_rubin: needs at least 2 chains");
  const std::size_t n = chains.front().size();
  const std::size_t d = chains.front().dim;
  for (const auto& c : chains) {
    if (c.size() != n || c.dim != d) throw ValidationError("gelman_rubin: chains differ in length or dimension");
  }
  if (n < 10) throw ValidationError(fmt::format("gelman_rubin: chains need >= 10 samples, got {}", n));

  const double m = static_cast<double>(chains.size());
  const double nn = static_cast<double>(n);
  std::vector<double> psrf(d);
  std::vector<double> means(chains.size());
  for (std::size_t j = 0; j < d; ++j) {
    double within = 0.0;
    for (std::size_t c = 0; c < chains.size(); ++c) {
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean += chains[c][i][j];
      mean /= nn;
      double ss = 0.0;
      for (std::size_t i = 0; i < n; ++i) ss += (chains[c][i][j] - mean) * (chains[c][i][j] - mean);
      means[c] = mean;
      within += ss / (nn - 1.0);
    }
    within /= m;
    double grand = 0.0;
    for (double v : means) grand += v;
    grand /= m;
    double between = 0.0;
    for (double v : means) between += (v - grand) * (v - grand);
    between *= nn / (m - 1.0);

    if (between == 0.0) {
      psrf[j] = 1.0;
    } else if (within == 0.0) {
      psrf[j] = std::numeric_limits<double>::infinity();
    } else {
      const double v_hat = (nn - 1.0) / nn * within + between / nn;
      psrf[j] = std::sqrt(v_hat / within);
    }
  }
  return psrf;
}

std::string chain_to_csv(const Chain& chain) {
  std::string out = "step";
  for (std::size_t j = 0; j < chain.dim; ++j) out += fmt::format(",x_{}", j);
  out += ",log_target,accepted\n";
  for (std::size_t i = 0; i < chain.size(); ++i) {
    out += std::to_string(chain.step[i]);
    for (double v : chain[i]) out += "," + core::format_real(v);
    out += "," + core::format_real(chain.log_target[i]) + (chain.accepted[i] ? ",1\n" : ",0\n");
  }
  return out;
}

}  // namespace ebprior::mcmc
