#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ebprior/config.hpp"
#include "ebprior/core/atoms.hpp"
#include "ebprior/toy/spring.hpp"

namespace ebprior::toy {

struct Pulse {
  double time;       // s, start of the pulse
  double amplitude;  // m/s^2, force per unit mass
  double width;      // s
};

struct TreatmentSpec {
  std::vector<Pulse> pulses;
  double horizon = 10.0;  // s
  double x_bell = 0.13;   // m
  double mass = kDefaultMass;
  double x0 = kDefaultX0;
  double dt = 1e-3;  // RK4 step, at most 1 ms

  /// Three 0.1 s pulses of 1.5 m/s^2 at t = 1, 3 and 5 s.
  static TreatmentSpec standard();

  void validate() const;
  double force(double t) const;
};

/// [treatment] section: horizon, x_bell, mass, x0, dt and
/// `pulses = t a w; t a w; ...`. Missing keys keep the standard values.
TreatmentSpec read_treatment_spec(ConfigFile& file);
TreatmentSpec read_treatment_spec(const std::filesystem::path& path);
std::string treatment_spec_to_text(const TreatmentSpec& spec);

struct Trajectory {
  std::vector<double> t;
  std::vector<double> x;
  bool hit = false;
};

/// x'' = -(K/m) x + F(t), x(0) = x0, x'(0) = 0, by fixed-step RK4 over the
/// horizon. hit is max x >= x_bell on the step grid.
Trajectory treated_response(double stiffness, const TreatmentSpec& spec);
/// Same predicate without keeping the trajectory; stops at the first hit.
bool treatment_succeeds(double stiffness, const TreatmentSpec& spec);

/// r(x_k) for every atom.
std::vector<double> success_indicators(const core::AtomSet& atoms, const TreatmentSpec& spec);
/// sum_k v_k r(x_k)
double success_rate(const core::WeightVector& posterior, std::span<const double> indicators);
double success_rate(const core::WeightVector& posterior, const core::AtomSet& atoms, const TreatmentSpec& spec);
/// sqrt(1/(M-1) sum (R_est - R_true)^2)
double success_rate_std(std::span<const double> estimated, std::span<const double> truth);
/// r evaluated at each spring's actual stiffness.
std::vector<double> true_success_rate(std::span<const double> stiffness, const TreatmentSpec& spec);

}  // namespace ebprior::toy
