#include "models.hpp"

#include <sstream>

#include <fmt/format.h>

#include "ebprior/core/csv.hpp"
#include "ebprior/error.hpp"
#include "ebprior/toy/ode_fixture.hpp"
#include "ebprior/toy/spring.hpp"

namespace ebprior::cli {

core::ForwardModel model_by_name(const std::string& name, std::size_t identity_dim) {
  if (name == "identity") return core::ForwardModel::identity(identity_dim);
  if (name == "spring1") return toy::one_time_spring();
  if (name == "spring2") return toy::two_time_spring();
  if (name == "ode-fixture") return toy::ode_fixture_model();
  throw ValidationError(fmt::format("unknown model '{}' (identity|spring1|spring2|ode-fixture)", name));
}

ModelSetup read_model(ConfigFile& file, std::size_t identity_dim, std::optional<std::size_t> data_dim,
                      const std::optional<std::string>& name, const std::optional<double>& sigma) {
  const auto from_file = file.take("model", "name");
  const std::string model_name = name.value_or(from_file.value_or("identity"));
  auto model = model_by_name(model_name, identity_dim);
  if (data_dim && model.dim_obs() != *data_dim) {
    throw ValidationError(fmt::format("model '{}' predicts {} values per measurement but the data has {}", model_name,
                                      model.dim_obs(), *data_dim));
  }
  const std::size_t n_obs = model.dim_obs();

  const bool spring = model_name == "spring1" || model_name == "spring2";
  const double default_sigma = spring ? toy::kDefaultSigma : model_name == "ode-fixture" ? 0.05 : 1.0;
  std::vector<double> sd;
  if (sigma) {
    sd.assign(n_obs, *sigma);
  } else if (auto text = file.take("model", "sigma")) {
    std::istringstream in(*text);
    std::string f;
    while (in >> f) sd.push_back(core::parse_real(f, "[model] sigma"));
    if (sd.size() == 1) sd.assign(n_obs, sd[0]);
    if (sd.size() != n_obs) {
      throw ValidationError(fmt::format("[model] sigma: expected 1 or {} values, got {}", n_obs, sd.size()));
    }
  } else {
    sd.assign(n_obs, default_sigma);
  }
  for (double s : sd) {
    if (!(s > 0.0)) throw ValidationError("[model] sigma must be > 0");
  }

  const double lo_default = spring ? 1.0 : model_name == "ode-fixture" ? 0.05 : -10.0;
  const double hi_default = spring ? 50.0 : model_name == "ode-fixture" ? 3.0 : 10.0;
  const double lo = file.take_real("model", "prior_lo").value_or(lo_default);
  const double hi = file.take_real("model", "prior_hi").value_or(hi_default);
  file.finish_section("model");
  auto prior = toy::box_prior(model.dim_param(), lo, hi);
  return {std::move(model), core::NoiseModel::gaussian(std::move(sd)), std::move(prior)};
}

AtomSampling read_atom_sampling(ConfigFile& file, std::uint64_t seed) {
  AtomSampling a;
  a.sampler.steps = 20000;
  a.sampler.proposal_scale = 0.5;
  a.sampler.adaptive = true;
  a.sampler.seed = seed;
  const std::string sec = "mcmc";
  if (auto v = file.take_count(sec, "steps")) a.sampler.steps = *v;
  if (auto v = file.take_count(sec, "burn_in")) a.sampler.burn_in = *v;
  if (auto v = file.take_real(sec, "proposal_scale")) a.sampler.proposal_scale = *v;
  if (auto v = file.take_flag(sec, "adaptive")) a.sampler.adaptive = *v;
  if (auto v = file.take_real(sec, "beta")) a.sampler.beta = *v;
  if (auto v = file.take_count(sec, "per_measurement")) a.per_measurement = *v;
  file.finish_section(sec);
  a.sampler.validate();
  if (a.per_measurement == 0) throw ValidationError("[mcmc] per_measurement must be >= 1");
  return a;
}

}  // namespace ebprior::cli
