#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ebprior/core/model.hpp"
#include "ebprior/random.hpp"

namespace ebprior::toy {

// SI units throughout: N/m, kg, s, m.
inline constexpr double kDefaultMass = 0.7;
inline constexpr double kDefaultX0 = -0.1;
inline constexpr double kDefaultSigma = 0.01;
inline constexpr double kCentimetersPerMeter = 100.0;

/// Released from rest at x0: x(t) = x0 cos(sqrt(K/m) t).
double spring_response(double stiffness, double mass, double t, double x0 = kDefaultX0);

/// phi(K) = (x(t_1), ..., x(t_n)). Named "spring1" for one time, "spring2"
/// for two.
core::ForwardModel spring_model(std::vector<double> times, double mass = kDefaultMass, double x0 = kDefaultX0);
inline core::ForwardModel one_time_spring() { return spring_model({1.0}); }
inline core::ForwardModel two_time_spring() { return spring_model({1.0, 1.7}); }

/// z = phi(K) + N(0, sigma^2) per coordinate.
std::vector<double> measure(const core::ForwardModel& model, double stiffness, double sigma, Rng& rng);

}  // namespace ebprior::toy
