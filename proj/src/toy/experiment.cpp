#include "ebprior/toy/experiment.hpp"

#include "ebprior/error.hpp"
#include "ebprior/estimators/npmle.hpp"

namespace ebprior::toy {

ToyExperimentConfig::ToyExperimentConfig() { mple.gamma = 49.0; }

const MethodResult& ToyExperimentResult::method(const std::string& name) const {
  for (const auto& m : methods) {
    if (m.name == name) return m;
  }
  throw ValidationError("toy experiment: no method named " + name);
}

std::vector<double> posterior_success_rates(const core::LikelihoodMatrix& L, const core::WeightVector& prior,
                                            std::span<const double> indicators) {
  std::vector<double> rates(L.rows());
  for (std::size_t m = 0; m < L.rows(); ++m) {
    rates[m] = success_rate(core::posterior_weights(L.log_row(m), prior), indicators);
  }
  return rates;
}

ToyExperimentResult run_toy_experiment(const ToyExperimentConfig& cfg) {
  const auto model = spring_model(cfg.times, cfg.treatment.mass, cfg.treatment.x0);
  const auto noise = core::NoiseModel::gaussian(cfg.times.size(), cfg.sigma);
  auto pop = generate_population(cfg.population);
  auto data = measure_population(pop, model, cfg.sigma, cfg.seed);
  auto atoms = core::AtomSet::grid_1d(cfg.k_lo, cfg.k_hi, cfg.atoms);
  const auto images = core::evaluate_model(model, atoms);
  const auto L = core::likelihood_matrix(images, noise, data);
  const auto indicators = success_indicators(atoms, cfg.treatment);
  auto truth = true_success_rate(pop.stiffness, cfg.treatment);

  const auto pi0 = core::WeightVector::uniform(atoms.size());
  std::vector<std::pair<std::string, core::WeightVector>> priors;
  priors.emplace_back("pi0", pi0);
  priors.emplace_back("npmle", estimators::npmle_run(L, pi0, cfg.iterations, 0.0).final_weights);

  auto ds_cfg = cfg.dsmle;
  ds_cfg.seed = cfg.seed;
  const auto smoothed = estimators::dsmle_prepare(data, noise, ds_cfg);
  const auto Ls = core::likelihood_matrix(images, smoothed.noise, smoothed.data);
  priors.emplace_back("dsmle", estimators::npmle_run(Ls, pi0, cfg.iterations, 0.0).final_weights);
  priors.emplace_back("mple", estimators::mple_run(L, images, noise, pi0, cfg.mple, cfg.seed).final_weights);

  ToyExperimentResult out{std::move(pop), std::move(data), std::move(atoms), std::move(truth), {}};
  for (auto& [name, prior] : priors) {
    auto rates = posterior_success_rates(L, prior, indicators);
    const double s = success_rate_std(rates, out.truth);
    out.methods.push_back({name, std::move(prior), std::move(rates), s});
  }
  return out;
}

}  // namespace ebprior::toy
