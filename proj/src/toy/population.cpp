#include "ebprior/toy/population.hpp"

#include <cmath>

#include <fmt/format.h>

#include "ebprior/error.hpp"
#include "ebprior/random.hpp"
#include "ebprior/toy/spring.hpp"

namespace ebprior::toy {

void PopulationParams::validate() const {
  if (!(k1 > 0.0 && k2 > 0.0)) throw ValidationError("population: nominal stiffness values must be > 0");
  if (n1 + n2 == 0) throw ValidationError("population: at least one spring is required");
  if (!(relative_std >= 0.0 && std::isfinite(relative_std))) {
    throw ValidationError("population: relative std must be finite and >= 0");
  }
}

SpringPopulation generate_population(const PopulationParams& params) {
  params.validate();
  auto rng = make_stream(params.seed, "population");
  SpringPopulation pop;
  const auto draw_box = [&](double nominal, std::size_t count, const char* label) {
    std::normal_distribution<double> normal(nominal, params.relative_std * nominal);
    for (std::size_t i = 0; i < count; ++i) {
      double k = normal(rng);
      while (!(k > 0.0)) k = normal(rng);
      pop.id.push_back(fmt::format("spring{:03d}", pop.size() + 1));
      pop.box.emplace_back(label);
      pop.stiffness.push_back(k);
    }
  };
  draw_box(params.k1, params.n1, "box1");
  draw_box(params.k2, params.n2, "box2");
  return pop;
}

std::string population_to_csv(const SpringPopulation& pop) {
  std::string out = "id,box,K_true\n";
  for (std::size_t i = 0; i < pop.size(); ++i) {
    out += fmt::format("{},{},{}\n", pop.id[i], pop.box[i], core::format_real(pop.stiffness[i]));
  }
  return out;
}

SpringPopulation population_from_csv(const core::CsvTable& table) {
  const auto id = table.require_column("id");
  const auto box = table.require_column("box");
  const auto k = table.require_column("K_true");
  SpringPopulation pop;
  for (const auto& row : table.rows) {
    const double v = core::parse_real(row[k], "K_true");
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(fmt::format("population: spring '{}' has K_true <= 0", row[id]));
    pop.id.push_back(row[id]);
    pop.box.push_back(row[box]);
    pop.stiffness.push_back(v);
  }
  if (pop.size() == 0) throw ValidationError("population: no springs");
  return pop;
}

SpringPopulation read_population(const std::filesystem::path& path) {
  return population_from_csv(core::read_csv(path));
}

core::MeasurementSet measure_population(const SpringPopulation& pop, const core::ForwardModel& model, double sigma,
                                        std::uint64_t seed, bool groups) {
  auto rng = make_stream(seed, "measure");
  std::vector<core::Measurement> recs;
  recs.reserve(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) {
    recs.push_back({pop.id[i], groups ? std::optional<std::string>(pop.box[i]) : std::nullopt,
                    measure(model, pop.stiffness[i], sigma, rng), {}});
  }
  return core::MeasurementSet(std::move(recs));
}

core::MeasurementSet rescaled(const core::MeasurementSet& data, double factor) {
  std::vector<core::Measurement> recs = data.records();
  for (auto& r : recs) {
    for (std::size_t i = 0; i < r.z.size(); ++i) {
      if (r.mask[i]) r.z[i] *= factor;
    }
  }
  return core::MeasurementSet(std::move(recs));
}

}  // namespace ebprior::toy
