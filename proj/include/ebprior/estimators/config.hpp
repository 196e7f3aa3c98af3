#pragma once

#include "ebprior/config.hpp"
#include "ebprior/estimators/dsmle.hpp"
#include "ebprior/estimators/mple.hpp"
#include "ebprior/estimators/npmle.hpp"

namespace ebprior::estimators {

struct EstimatorConfig {
  NpmleConfig npmle;
  DsmleConfig dsmle;
  MpleConfig mple;
};

/// Consumes sections [npmle] (max_iter, tol), [dsmle] (bandwidth, samples,
/// seed) and [mple] (gamma, samples, step, backtrack, max_iter, tol).
/// Unknown keys in these sections are rejected immediately.
EstimatorConfig read_estimator_config(ConfigFile& file);

}  // namespace ebprior::estimators
