#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ebprior/random.hpp"

namespace ebprior::core {

/// Deterministic map from parameter space R^d to observation space R^n.
class ForwardModel {
 public:
  using EvalFn = std::function<void(std::span<const double> x, std::span<double> out)>;

  ForwardModel(std::string name, std::size_t dim_param, std::size_t dim_obs, EvalFn eval);

  /// phi(x) = x on R^d.
  static ForwardModel identity(std::size_t dim);

  const std::string& name() const { return name_; }
  std::size_t dim_param() const { return dim_param_; }
  std::size_t dim_obs() const { return dim_obs_; }

  std::vector<double> operator()(std::span<const double> x) const;
  void eval(std::span<const double> x, std::span<double> out) const;

 private:
  std::string name_;
  std::size_t dim_param_;
  std::size_t dim_obs_;
  EvalFn eval_;
};

/// Observation mask: true where the coordinate was measured.
using Mask = std::vector<bool>;

/// Density of the additive error E. Either the built-in diagonal Gaussian,
/// a user density that factorizes per coordinate (masks allowed), or a
/// joint user density (masks rejected).
class NoiseModel {
 public:
  using JointLogDensity = std::function<double(std::span<const double> residual)>;
  using CoordLogDensity = std::function<double(std::size_t coord, double residual)>;
  using Sampler = std::function<void(Rng& rng, std::span<double> out)>;

  static NoiseModel gaussian(std::vector<double> sigma);
  static NoiseModel gaussian(std::size_t dim, double sigma);
  static NoiseModel factorized(std::size_t dim, CoordLogDensity log_density, Sampler sampler);
  static NoiseModel joint(std::size_t dim, JointLogDensity log_density, Sampler sampler);

  std::size_t dim() const { return dim_; }
  bool mask_support() const { return kind_ != Kind::joint; }
  bool is_gaussian() const { return kind_ == Kind::gaussian; }
  /// Per-coordinate standard deviations of the built-in Gaussian.
  std::span<const double> gaussian_sigma() const;

  /// log rho_E(residual), restricted to the observed coordinates when a
  /// mask is given.
  double log_density(std::span<const double> residual, const Mask* mask = nullptr) const;
  void sample(Rng& rng, std::span<double> out) const;

 private:
  enum class Kind { gaussian, factorized, joint };
  NoiseModel() = default;

  Kind kind_ = Kind::gaussian;
  std::size_t dim_ = 0;
  std::vector<double> sigma_;
  std::vector<double> log_norm_;  // -log(sigma) - 0.5 log(2 pi)
  CoordLogDensity coord_density_;
  JointLogDensity joint_density_;
  Sampler sampler_;
};

}  // namespace ebprior::core
