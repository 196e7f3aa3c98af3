#include "ebprior/toy/ode_fixture.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "ebprior/error.hpp"

namespace ebprior::toy {

core::ForwardModel ode_fixture_model() {
  return core::ForwardModel("ode-fixture", 3, 10, [](std::span<const double> p, std::span<double> out) {
    const double a = p[0], b = p[1];
    double y1 = p[2], y2 = 0.0;
    constexpr int per_unit = 100;
    constexpr double h = 1.0 / per_unit;
    const auto f1 = [a](double u) { return -a * u; };
    const auto f2 = [a, b](double u, double v) { return a * u - b * v; };
    for (int obs = 0; obs < 5; ++obs) {
      for (int s = 0; s < per_unit; ++s) {
        const double k1a = f1(y1), k1b = f2(y1, y2);
        const double k2a = f1(y1 + 0.5 * h * k1a), k2b = f2(y1 + 0.5 * h * k1a, y2 + 0.5 * h * k1b);
        const double k3a = f1(y1 + 0.5 * h * k2a), k3b = f2(y1 + 0.5 * h * k2a, y2 + 0.5 * h * k2b);
        const double k4a = f1(y1 + h * k3a), k4b = f2(y1 + h * k3a, y2 + h * k3b);
        y1 += h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
        y2 += h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
      }
      out[2 * obs] = y1;
      out[2 * obs + 1] = y2;
    }
  });
}

mcmc::Prior0 box_prior(std::size_t dim, double lo, double hi) {
  if (dim == 0 || !(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw ValidationError(fmt::format("prior box [{}, {}] in dimension {} is invalid", lo, hi, dim));
  }
  const double log_density = -static_cast<double>(dim) * std::log(hi - lo);
  return {dim,
          [lo, hi, log_density](std::span<const double> x) {
            for (double v : x) {
              if (!(v >= lo && v <= hi)) return -std::numeric_limits<double>::infinity();
            }
            return log_density;
          },
          [lo, hi](Rng& rng, std::span<double> out) {
            std::uniform_real_distribution<double> u(lo, hi);
            for (double& v : out) v = u(rng);
          }};
}

}  // namespace ebprior::toy
