#pragma once

#include <span>

#include "ebprior/core/atoms.hpp"

namespace ebprior::estimators {

/// Euclidean projection onto the probability simplex (sort and threshold).
core::WeightVector simplex_project(std::span<const double> v);

}  // namespace ebprior::estimators
