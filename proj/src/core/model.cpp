#include "ebprior/core/model.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "ebprior/error.hpp"

namespace ebprior::core {

ForwardModel::ForwardModel(std::string name, std::size_t dim_param, std::size_t dim_obs,
                           EvalFn eval)
    : name_(std::move(name)), dim_param_(dim_param), dim_obs_(dim_obs), eval_(std::move(eval)) {
  if (dim_param_ == 0 || dim_obs_ == 0) {
    throw ValidationError(fmt::format("forward model '{}': dimensions must be positive", name_));
  }
  if (!eval_) throw ValidationError(fmt::format("forward model '{}': empty evaluator", name_));
}

ForwardModel ForwardModel::identity(std::size_t dim) {
  return ForwardModel("identity", dim, dim, [](std::span<const double> x, std::span<double> out) {
    std::copy(x.begin(), x.end(), out.begin());
  });
}

std::vector<double> ForwardModel::operator()(std::span<const double> x) const {
  std::vector<double> out(dim_obs_);
  eval(x, out);
  return out;
}

void ForwardModel::eval(std::span<const double> x, std::span<double> out) const {
  if (x.size() != dim_param_ || out.size() != dim_obs_) {
    throw ValidationError(fmt::format("forward model '{}': expected {} -> {} dimensions, got {} -> {}",
                                      name_, dim_param_, dim_obs_, x.size(), out.size()));
  }
  eval_(x, out);
}

NoiseModel NoiseModel::gaussian(std::vector<double> sigma) {
  if (sigma.empty()) throw ValidationError("gaussian noise: empty sigma");
  NoiseModel n;
  n.kind_ = Kind::gaussian;
  n.dim_ = sigma.size();
  n.log_norm_.reserve(sigma.size());
  for (double s : sigma) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw ValidationError(fmt::format("gaussian noise: sigma must be positive and finite, got {}", s));
    }
    n.log_norm_.push_back(-std::log(s) - 0.5 * std::log(2.0 * std::numbers::pi));
  }
  n.sigma_ = std::move(sigma);
  return n;
}

NoiseModel NoiseModel::gaussian(std::size_t dim, double sigma) {
  return gaussian(std::vector<double>(dim, sigma));
}

NoiseModel NoiseModel::factorized(std::size_t dim, CoordLogDensity log_density, Sampler sampler) {
  if (dim == 0 || !log_density || !sampler) throw ValidationError("factorized noise: incomplete definition");
  NoiseModel n;
  n.kind_ = Kind::factorized;
  n.dim_ = dim;
  n.coord_density_ = std::move(log_density);
  n.sampler_ = std::move(sampler);
  return n;
}

NoiseModel NoiseModel::joint(std::size_t dim, JointLogDensity log_density, Sampler sampler) {
  if (dim == 0 || !log_density || !sampler) throw ValidationError("joint noise: incomplete definition");
  NoiseModel n;
  n.kind_ = Kind::joint;
  n.dim_ = dim;
  n.joint_density_ = std::move(log_density);
  n.sampler_ = std::move(sampler);
  return n;
}

std::span<const double> NoiseModel::gaussian_sigma() const {
  if (kind_ != Kind::gaussian) throw ValidationError("noise model is not the built-in gaussian");
  return sigma_;
}

double NoiseModel::log_density(std::span<const double> residual, const Mask* mask) const {
  if (residual.size() != dim_) {
    throw ValidationError(fmt::format("noise density: expected {} coordinates, got {}", dim_, residual.size()));
  }
  if (mask != nullptr && mask->size() != dim_) {
    throw ValidationError(fmt::format("noise density: mask has {} entries, expected {}", mask->size(), dim_));
  }
  switch (kind_) {
    case Kind::gaussian: {
      double acc = 0.0;
      for (std::size_t i = 0; i < dim_; ++i) {
        if (mask != nullptr && !(*mask)[i]) continue;
        const double r = residual[i] / sigma_[i];
        acc += log_norm_[i] - 0.5 * r * r;
      }
      return acc;
    }
    case Kind::factorized: {
      double acc = 0.0;
      for (std::size_t i = 0; i < dim_; ++i) {
        if (mask != nullptr && !(*mask)[i]) continue;
        acc += coord_density_(i, residual[i]);
      }
      return acc;
    }
    case Kind::joint:
      if (mask != nullptr) {
        for (bool observed : *mask) {
          if (!observed) throw ValidationError("masked observations require a per-coordinate noise density");
        }
      }
      return joint_density_(residual);
  }
  return 0.0;
}

void NoiseModel::sample(Rng& rng, std::span<double> out) const {
  if (out.size() != dim_) throw ValidationError("noise sample: dimension mismatch");
  if (kind_ == Kind::gaussian) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t i = 0; i < dim_; ++i) out[i] = sigma_[i] * normal(rng);
    return;
  }
  sampler_(rng, out);
}

}  // namespace ebprior::core
