#include "ebprior/toy/spring.hpp"

#include <cmath>

#include <fmt/format.h>

#include "ebprior/error.hpp"

namespace ebprior::toy {

double spring_response(double stiffness, double mass, double t, double x0) {
  if (!(stiffness > 0.0)) throw ValidationError(fmt::format("spring: stiffness must be > 0, got {}", stiffness));
  if (!(mass > 0.0)) throw ValidationError(fmt::format("spring: mass must be > 0, got {}", mass));
  return x0 * std::cos(std::sqrt(stiffness / mass) * t);
}

core::ForwardModel spring_model(std::vector<double> times, double mass, double x0) {
  if (times.empty()) throw ValidationError("spring: at least one measurement time is required");
  if (!(mass > 0.0)) throw ValidationError(fmt::format("spring: mass must be > 0, got {}", mass));
  const std::string name = times.size() == 1 ? "spring1" : times.size() == 2 ? "spring2" : "spring";
  const std::size_t n = times.size();
  return core::ForwardModel(name, 1, n, [times = std::move(times), mass, x0](std::span<const double> k,
                                                                             std::span<double> out) {
    for (std::size_t i = 0; i < times.size(); ++i) out[i] = spring_response(k[0], mass, times[i], x0);
  });
}

std::vector<double> measure(const core::ForwardModel& model, double stiffness, double sigma, Rng& rng) {
  if (!(sigma >= 0.0)) throw ValidationError("measure: sigma must be >= 0");
  auto z = model(std::vector{stiffness});
  if (sigma > 0.0) {
    std::normal_distribution<double> normal(0.0, sigma);
    for (double& v : z) v += normal(rng);
  }
  return z;
}

}  // namespace ebprior::toy
