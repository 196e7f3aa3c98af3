#include "ebprior/toy/treatment.hpp"

#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "ebprior/core/csv.hpp"
#include "ebprior/error.hpp"
#include "ebprior/parallel.hpp"

namespace ebprior::toy {

TreatmentSpec TreatmentSpec::standard() {
  TreatmentSpec s;
  s.pulses = {{1.0, 1.5, 0.1}, {3.0, 1.5, 0.1}, {5.0, 1.5, 0.1}};
  return s;
}

void TreatmentSpec::validate() const {
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!(horizon > 0.0) || !finite(horizon)) throw ValidationError("treatment: horizon must be > 0");
  if (!(mass > 0.0) || !finite(mass)) throw ValidationError("treatment: mass must be > 0");
  if (!(dt > 0.0 && dt <= 1e-3)) throw ValidationError(fmt::format("treatment: dt must lie in (0, 1e-3], got {}", dt));
  if (!finite(x_bell) || !finite(x0)) throw ValidationError("treatment: x_bell and x0 must be finite");
  for (const auto& p : pulses) {
    if (!(p.width > 0.0) || !finite(p.width)) throw ValidationError("treatment: pulse width must be > 0");
    if (!finite(p.amplitude)) throw ValidationError("treatment: pulse amplitude must be finite");
    if (!(p.time >= 0.0 && p.time + p.width <= horizon)) {
      throw ValidationError(fmt::format("treatment: pulse at t = {} does not fit inside the horizon", p.time));
    }
  }
}

double TreatmentSpec::force(double t) const {
  double f = 0.0;
  for (const auto& p : pulses) {
    if (t >= p.time && t < p.time + p.width) f += p.amplitude;
  }
  return f;
}

namespace {

std::vector<Pulse> parse_pulses(const std::string& text) {
  std::vector<Pulse> out;
  std::stringstream all(text);
  std::string item;
  while (std::getline(all, item, ';')) {
    std::stringstream fields(item);
    std::vector<std::string> parts;
    std::string f;
    while (fields >> f) parts.push_back(f);
    if (parts.empty()) continue;
    if (parts.size() != 3) {
      throw ValidationError(fmt::format("treatment: pulse '{}' must be 'time amplitude width'", item));
    }
    out.push_back({core::parse_real(parts[0], "pulse time"), core::parse_real(parts[1], "pulse amplitude"),
                   core::parse_real(parts[2], "pulse width")});
  }
  return out;
}

template <class Fn>
void integrate(double stiffness, const TreatmentSpec& spec, Fn&& visit) {
  if (!(stiffness > 0.0)) throw ValidationError(fmt::format("treatment: stiffness must be > 0, got {}", stiffness));
  const double k = stiffness / spec.mass;
  const double h = spec.dt;
  const auto steps = static_cast<std::size_t>(std::llround(spec.horizon / h));
  double x = spec.x0, v = 0.0;
  if (!visit(0.0, x)) return;
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * h;
    const double f0 = spec.force(t), fm = spec.force(t + 0.5 * h), f1 = spec.force(t + h);
    const double k1x = v, k1v = -k * x + f0;
    const double k2x = v + 0.5 * h * k1v, k2v = -k * (x + 0.5 * h * k1x) + fm;
    const double k3x = v + 0.5 * h * k2v, k3v = -k * (x + 0.5 * h * k2x) + fm;
    const double k4x = v + h * k3v, k4v = -k * (x + h * k3x) + f1;
    x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if (!visit(static_cast<double>(i + 1) * h, x)) return;
  }
}

}  // namespace

TreatmentSpec read_treatment_spec(ConfigFile& file) {
  TreatmentSpec s = TreatmentSpec::standard();
  const std::string sec = "treatment";
  if (auto v = file.take_real(sec, "horizon")) s.horizon = *v;
  if (auto v = file.take_real(sec, "x_bell")) s.x_bell = *v;
  if (auto v = file.take_real(sec, "mass")) s.mass = *v;
  if (auto v = file.take_real(sec, "x0")) s.x0 = *v;
  if (auto v = file.take_real(sec, "dt")) s.dt = *v;
  if (auto v = file.take(sec, "pulses")) s.pulses = parse_pulses(*v);
  file.finish_section(sec);
  s.validate();
  return s;
}

TreatmentSpec read_treatment_spec(const std::filesystem::path& path) {
  auto file = ConfigFile::load(path);
  auto spec = read_treatment_spec(file);
  file.finish();
  return spec;
}

std::string treatment_spec_to_text(const TreatmentSpec& spec) {
  std::string pulses;
  for (const auto& p : spec.pulses) {
    if (!pulses.empty()) pulses += "; ";
    pulses += fmt::format("{} {} {}", core::format_real(p.time), core::format_real(p.amplitude),
                          core::format_real(p.width));
  }
  return fmt::format("[treatment]\nhorizon = {}\nx_bell = {}\nmass = {}\nx0 = {}\ndt = {}\npulses = {}\n",
                     core::format_real(spec.horizon), core::format_real(spec.x_bell), core::format_real(spec.mass),
                     core::format_real(spec.x0), core::format_real(spec.dt), pulses);
}

Trajectory treated_response(double stiffness, const TreatmentSpec& spec) {
  spec.validate();
  Trajectory out;
  integrate(stiffness, spec, [&](double t, double x) {
    out.t.push_back(t);
    out.x.push_back(x);
    if (x >= spec.x_bell) out.hit = true;
    return true;
  });
  return out;
}

bool treatment_succeeds(double stiffness, const TreatmentSpec& spec) {
  bool hit = false;
  integrate(stiffness, spec, [&](double, double x) {
    hit = x >= spec.x_bell;
    return !hit;
  });
  return hit;
}

std::vector<double> success_indicators(const core::AtomSet& atoms, const TreatmentSpec& spec) {
  spec.validate();
  if (atoms.dim() != 1) throw ValidationError("success rate: atoms must be stiffness values (dimension 1)");
  std::vector<double> r(atoms.size());
  parallel_for(atoms.size(), [&](std::size_t k) { r[k] = treatment_succeeds(atoms[k][0], spec) ? 1.0 : 0.0; });
  return r;
}

double success_rate(const core::WeightVector& posterior, std::span<const double> indicators) {
  if (posterior.size() != indicators.size()) throw ValidationError("success rate: weight and atom counts differ");
  double s = 0.0;
  for (std::size_t k = 0; k < indicators.size(); ++k) s += posterior[k] * indicators[k];
  return s;
}

double success_rate(const core::WeightVector& posterior, const core::AtomSet& atoms, const TreatmentSpec& spec) {
  return success_rate(posterior, success_indicators(atoms, spec));
}

double success_rate_std(std::span<const double> estimated, std::span<const double> truth) {
  if (estimated.size() != truth.size()) throw ValidationError("success_rate_std: length mismatch");
  if (estimated.size() < 2) throw ValidationError("success_rate_std: needs at least 2 values");
  double s = 0.0;
  for (std::size_t m = 0; m < truth.size(); ++m) s += (estimated[m] - truth[m]) * (estimated[m] - truth[m]);
  return std::sqrt(s / static_cast<double>(truth.size() - 1));
}

std::vector<double> true_success_rate(std::span<const double> stiffness, const TreatmentSpec& spec) {
  spec.validate();
  std::vector<double> r(stiffness.size());
  parallel_for(stiffness.size(), [&](std::size_t m) { r[m] = treatment_succeeds(stiffness[m], spec) ? 1.0 : 0.0; });
  return r;
}

}  // namespace ebprior::toy
