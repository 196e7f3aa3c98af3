#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ebprior/core/atoms.hpp"
#include "ebprior/core/likelihood.hpp"
#include "ebprior/estimators/dsmle.hpp"
#include "ebprior/estimators/mple.hpp"
#include "ebprior/toy/population.hpp"
#include "ebprior/toy/treatment.hpp"

namespace ebprior::toy {

struct ToyExperimentConfig {
  PopulationParams population;
  std::vector<double> times{1.0};
  double sigma = kDefaultSigma;
  double k_lo = 1.0;
  double k_hi = 50.0;
  std::size_t atoms = 200;
  std::size_t iterations = 500;  // NPMLE and DS-MLE
  estimators::DsmleConfig dsmle;
  estimators::MpleConfig mple;
  TreatmentSpec treatment = TreatmentSpec::standard();
  std::uint64_t seed = 0;

  ToyExperimentConfig();
};

struct MethodResult {
  std::string name;  // pi0, npmle, dsmle, mple
  core::WeightVector prior;
  std::vector<double> rates;  // R_m per spring
  double sigma_r;
};

struct ToyExperimentResult {
  SpringPopulation population;
  core::MeasurementSet data;
  core::AtomSet atoms;
  std::vector<double> truth;  // r(K_true) per spring
  std::vector<MethodResult> methods;

  const MethodResult& method(const std::string& name) const;
};

/// R_m = sum_k v_k(m) r(x_k) where v(m) is the posterior of record m under
/// `prior`.
std::vector<double> posterior_success_rates(const core::LikelihoodMatrix& L, const core::WeightVector& prior,
                                            std::span<const double> indicators);

/// Population -> measurements -> priors (uniform, NPMLE, DS-MLE, MPLE) ->
/// per-spring success rates -> sigma_R of each against r(K_true).
ToyExperimentResult run_toy_experiment(const ToyExperimentConfig& cfg);

}  // namespace ebprior::toy
