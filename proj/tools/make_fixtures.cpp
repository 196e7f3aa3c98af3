// Regenerates the files under fixtures/. Output is deterministic.
//   make_fixtures <fixture-dir>
#include <array>
#include <filesystem>
#include <iostream>
#include <random>

#include <fmt/format.h>

#include "ebprior/core/csv.hpp"
#include "ebprior/core/io.hpp"
#include "ebprior/deconv/deconvolve.hpp"
#include "ebprior/random.hpp"
#include "ebprior/toy/ode_fixture.hpp"
#include "ebprior/toy/treatment.hpp"

namespace fs = std::filesystem;
using namespace ebprior;

namespace {

constexpr std::size_t kTwoAtomRecords = 10000;
constexpr std::array<double, 2> kTwoAtomLocations{-1.0, 2.0};
constexpr double kTwoAtomFirstShare = 0.3;
constexpr double kTwoAtomSigma = 1.0;

void two_atom(const fs::path& dir) {
  fs::create_directories(dir);
  auto rng = make_stream(20240601, "two-atom");
  std::bernoulli_distribution first(kTwoAtomFirstShare);
  std::normal_distribution<double> noise(0.0, kTwoAtomSigma);
  std::vector<core::Measurement> records;
  std::array<std::size_t, 2> counts{0, 0};
  for (std::size_t m = 0; m < kTwoAtomRecords; ++m) {
    const std::size_t k = first(rng) ? 0 : 1;
    ++counts[k];
    records.push_back({fmt::format("r{:05}", m), m % 2 == 0 ? "even" : "odd",
                       {kTwoAtomLocations[k] + noise(rng)}, {true}});
  }
  core::write_text_file(dir / "measurements.csv", core::measurements_to_csv(core::MeasurementSet(records)));
  core::write_text_file(dir / "atoms.csv",
                        core::weighted_atoms_to_csv(core::AtomSet(1, {kTwoAtomLocations.begin(), kTwoAtomLocations.end()},
                                                                  core::AtomProvenance::file),
                                                    core::WeightVector::uniform(2)));
  const double n = static_cast<double>(kTwoAtomRecords);
  core::write_text_file(dir / "truth.csv",
                        fmt::format("x_0,w_true,w_empirical\n{},{},{}\n{},{},{}\n", kTwoAtomLocations[0],
                                    kTwoAtomFirstShare, core::format_real(counts[0] / n), kTwoAtomLocations[1],
                                    1.0 - kTwoAtomFirstShare, core::format_real(counts[1] / n)));
  core::write_text_file(dir / "config.ini", fmt::format("[model]\nname = identity\nsigma = {}\n\n[npmle]\nmax_iter = 2000\ntol = 1e-10\n", kTwoAtomSigma));
}

void toy_files(const fs::path& dir) {
  fs::create_directories(dir);
  core::write_text_file(dir / "treatment.ini", toy::treatment_spec_to_text(toy::TreatmentSpec::standard()));
  auto zero = toy::TreatmentSpec::standard();
  zero.pulses.clear();
  core::write_text_file(dir / "treatment_zero.ini", toy::treatment_spec_to_text(zero));
  core::write_text_file(dir / "toy_mple.ini",
                        "[population]\nk1 = 15\nk2 = 30\nn1 = 150\nn2 = 150\nrelative_std = 0.15\n\n"
                        "[npmle]\nmax_iter = 500\n\n[mple]\ngamma = 49\n");
  core::write_text_file(dir / "ode_mple.ini",
                        "[model]\nname = ode-fixture\nsigma = 0.05\nprior_lo = 0.05\nprior_hi = 3\n\n"
                        "[mcmc]\nsteps = 4000\nper_measurement = 5\n\n[mple]\ngamma = 19\n");
}

void ode(const fs::path& dir) {
  fs::create_directories(dir);
  const auto model = toy::ode_fixture_model();
  auto rng = make_stream(20240601, "ode");
  std::uniform_real_distribution<double> param(0.5, 2.0);
  std::normal_distribution<double> noise(0.0, 0.05);
  std::vector<core::Measurement> records;
  std::string truth = "id,x_0,x_1,x_2\n";
  for (std::size_t m = 0; m < 12; ++m) {
    std::vector<double> x(model.dim_param());
    for (auto& v : x) v = param(rng);
    auto z = model(x);
    for (auto& v : z) v += noise(rng);
    const auto id = fmt::format("subject{:02}", m + 1);
    truth += fmt::format("{},{},{},{}\n", id, core::format_real(x[0]), core::format_real(x[1]), core::format_real(x[2]));
    records.push_back({id, std::nullopt, z, core::Mask(z.size(), true)});
  }
  core::write_text_file(dir / "measurements.csv", core::measurements_to_csv(core::MeasurementSet(records)));
  core::write_text_file(dir / "truth.csv", truth);
}

void deconvolution(const fs::path& dir) {
  fs::create_directories(dir);
  const auto original = deconv::synthetic_image(32, 32);
  const auto psf = deconv::Psf::gaussian(1.5);
  deconv::write_pgm(dir / "original.pgm", original);
  deconv::write_pgm(dir / "blurred.pgm", deconv::blur(original, psf));
  core::write_text_file(dir / "psf.txt", deconv::psf_to_text(psf));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures <fixture-dir>\n";
    return 2;
  }
  const fs::path root = argv[1];
  two_atom(root / "two_atom");
  toy_files(root / "toy");
  ode(root / "ode");
  deconvolution(root / "deconv");
  std::cout << "fixtures written to " << root << "\n";
  return 0;
}
