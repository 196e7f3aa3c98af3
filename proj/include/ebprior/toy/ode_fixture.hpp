#pragma once

#include "ebprior/core/model.hpp"
#include "ebprior/mcmc/atoms.hpp"

namespace ebprior::toy {

/// Two-compartment transfer y1' = -a y1, y2' = a y1 - b y2 with
/// y(0) = (c, 0), observed as (y1, y2) at t = 1..5 (n = 10, interleaved).
/// Parameters x = (a, b, c). Integrated by RK4 with step 0.01.
core::ForwardModel ode_fixture_model();

/// Uniform initial prior on [lo, hi]^d.
mcmc::Prior0 box_prior(std::size_t dim, double lo, double hi);

}  // namespace ebprior::toy
