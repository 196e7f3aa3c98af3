#include "ebprior/estimators/config.hpp"

#include "ebprior/error.hpp"

namespace ebprior::estimators {

EstimatorConfig read_estimator_config(ConfigFile& file) {
  EstimatorConfig cfg;
  if (auto v = file.take_count("npmle", "max_iter")) cfg.npmle.max_iter = *v;
  if (auto v = file.take_real("npmle", "tol")) cfg.npmle.tol = *v;

  if (auto v = file.take_real("dsmle", "bandwidth")) cfg.dsmle.bandwidth = *v;
  if (auto v = file.take_count("dsmle", "samples")) cfg.dsmle.samples = *v;
  if (auto v = file.take_count("dsmle", "seed")) cfg.dsmle.seed = *v;

  if (auto v = file.take_real("mple", "gamma")) cfg.mple.gamma = *v;
  if (auto v = file.take_count("mple", "samples")) cfg.mple.samples = *v;
  if (auto v = file.take_real("mple", "step")) cfg.mple.step = *v;
  if (auto v = file.take_real("mple", "backtrack")) cfg.mple.backtrack = *v;
  if (auto v = file.take_count("mple", "max_iter")) cfg.mple.max_iter = *v;
  if (auto v = file.take_real("mple", "tol")) cfg.mple.tol = *v;

  for (const char* section : {"npmle", "dsmle", "mple"}) file.finish_section(section);
  cfg.dsmle.validate();
  cfg.mple.validate();
  if (!(cfg.npmle.tol >= 0.0)) throw ValidationError("npmle: tol must be nonnegative");
  return cfg;
}

}  // namespace ebprior::estimators
