#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "ebprior/core/io.hpp"
#include "ebprior/core/likelihood.hpp"
#include "ebprior/error.hpp"
#include "ebprior/parallel.hpp"

using namespace ebprior;
using namespace ebprior::core;

namespace {

MeasurementSet points_1d(std::vector<double> z) { return MeasurementSet::from_points(1, z); }

LikelihoodMatrix from_linear(std::size_t rows, std::size_t cols, std::vector<double> lin) {
  for (double& v : lin) v = std::log(v);
  return LikelihoodMatrix(rows, cols, std::move(lin));
}

std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t k) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(k);
  double s = 0.0;
  for (double& v : w) s += (v = e(rng));
  for (double& v : w) v /= s;
  return w;
}

}  // namespace

TEST_CASE("gaussian noise integrates to one and peaks at zero") {
  const auto noise = NoiseModel::gaussian(1, 0.7);
  double mass = 0.0;
  const double h = 1e-3;
  for (double r = -10.0; r <= 10.0; r += h) mass += std::exp(noise.log_density(std::vector{r})) * h;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  const double at_zero = noise.log_density(std::vector{0.0});
  for (double r : {-1e-3, 1e-3, 0.5, -2.0}) CHECK(noise.log_density(std::vector{r}) < at_zero);
}

TEST_CASE("likelihood_matrix evaluates the shifted noise density") {
  const auto model = ForwardModel::identity(1);
  const auto noise = NoiseModel::gaussian(1, 1.0);

  SUBCASE("closed-form gaussian log density") {
    const auto L = likelihood_matrix(model, noise, AtomSet(1, {0.0}, AtomProvenance::grid), points_1d({1.0}));
    CHECK(L.log_at(0, 0) == doctest::Approx(-0.5 - 0.5 * std::log(2.0 * std::numbers::pi)).epsilon(1e-15));
  }
  SUBCASE("zero residual is the row maximum") {
    const AtomSet atoms(1, {-1.0, 0.25, 2.0, 3.5}, AtomProvenance::grid);
    const auto L = likelihood_matrix(model, noise, atoms, points_1d({0.25}));
    CHECK(L.log_at(0, 1) == doctest::Approx(-0.5 * std::log(2.0 * std::numbers::pi)));
    for (std::size_t k = 0; k < atoms.size(); ++k) CHECK(L.log_at(0, k) <= L.log_at(0, 1));
    CHECK(L.row_log_max(0) == L.log_at(0, 1));
  }
  SUBCASE("fully masked record is rejected by id") {
    std::vector<Measurement> recs{{"a", std::nullopt, {1.0, 2.0}, {true, true}},
                                  {"hidden", std::nullopt, {0.0, 0.0}, {false, false}}};
    const MeasurementSet data(std::move(recs));
    try {
      (void)likelihood_matrix(ForwardModel::identity(2), NoiseModel::gaussian(2, 1.0),
                              AtomSet(2, {0.0, 0.0}, AtomProvenance::grid), data);
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("hidden") != std::string::npos);
    }
  }
  SUBCASE("masks restrict the density to observed coordinates") {
    std::vector<Measurement> recs{{"p", std::nullopt, {1.0, 1e9}, {true, false}}};
    const auto L = likelihood_matrix(ForwardModel::identity(2), NoiseModel::gaussian(2, 1.0),
                                     AtomSet(2, {0.0, 0.0}, AtomProvenance::grid), MeasurementSet(std::move(recs)));
    CHECK(L.log_at(0, 0) == doctest::Approx(-0.5 - 0.5 * std::log(2.0 * std::numbers::pi)));
  }
  SUBCASE("masks with a joint density are rejected") {
    const auto joint = NoiseModel::joint(2, [](std::span<const double>) { return 0.0; },
                                         [](Rng&, std::span<double> out) { std::fill(out.begin(), out.end(), 0.0); });
    std::vector<Measurement> recs{{"p", std::nullopt, {1.0, 2.0}, {true, false}}};
    CHECK_THROWS_AS((void)likelihood_matrix(ForwardModel::identity(2), joint,
                                            AtomSet(2, {0.0, 0.0}, AtomProvenance::grid), MeasurementSet(std::move(recs))),
                    ValidationError);
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS((void)likelihood_matrix(ForwardModel::identity(2), NoiseModel::gaussian(2, 1.0),
                                            AtomSet(2, {0.0, 0.0}, AtomProvenance::grid), points_1d({1.0})),
                    ValidationError);
    CHECK_THROWS_AS((void)likelihood_matrix(model, noise, AtomSet(2, {0.0, 0.0}, AtomProvenance::grid), points_1d({1.0})),
                    ValidationError);
  }
  SUBCASE("non-finite model output names the atom") {
    const ForwardModel bad("log", 1, 1, [](std::span<const double> x, std::span<double> out) { out[0] = std::log(x[0]); });
    try {
      (void)likelihood_matrix(bad, noise, AtomSet(1, {1.0, 2.0, -1.0}, AtomProvenance::grid), points_1d({0.0}));
      FAIL("expected a numerical error");
    } catch (const NumericalError& e) {
      CHECK(std::string(e.what()).find("atom 2") != std::string::npos);
    }
  }
  SUBCASE("entries are floored") {
    const auto L = likelihood_matrix(model, NoiseModel::gaussian(1, 1e-3), AtomSet(1, {0.0, 50.0}, AtomProvenance::grid),
                                     points_1d({0.0}));
    CHECK(L.log_at(0, 1) == LikelihoodMatrix::kLogFloor);
    CHECK(L.scaled_row(0)[0] == 1.0);
  }
  SUBCASE("sources are attached") {
    const auto L = likelihood_matrix(model, noise, AtomSet(1, {0.0, 1.0}, AtomProvenance::grid), points_1d({0.5, 1.5, 2.5}));
    REQUIRE(L.atoms());
    REQUIRE(L.measurements());
    CHECK(L.atoms()->size() == 2);
    CHECK(L.measurements()->size() == 3);
  }
}

TEST_CASE("likelihood_matrix is independent of the thread count") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n01;
  std::vector<double> z(200), x(60);
  for (double& v : z) v = n01(rng);
  for (double& v : x) v = 2.0 * n01(rng);
  const AtomSet atoms(1, x, AtomProvenance::grid);
  const auto data = points_1d(z);
  set_thread_count(1);
  const auto a = likelihood_matrix(ForwardModel::identity(1), NoiseModel::gaussian(1, 0.5), atoms, data);
  set_thread_count(4);
  const auto b = likelihood_matrix(ForwardModel::identity(1), NoiseModel::gaussian(1, 0.5), atoms, data);
  set_thread_count(0);
  for (std::size_t m = 0; m < a.rows(); ++m) {
    for (std::size_t k = 0; k < a.cols(); ++k) REQUIRE(a.log_at(m, k) == b.log_at(m, k));
  }
}

TEST_CASE("marginal_likelihood") {
  const auto L = from_linear(2, 2, {2.0, 4.0, 0.5, 7.0});
  SUBCASE("point prior selects a column") {
    const auto rho = marginal_likelihood(L, WeightVector::unit(2, 0));
    CHECK(rho[0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(rho[1] == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("hand arithmetic") {
    const auto rho = marginal_likelihood(L, WeightVector({0.5, 0.5}));
    CHECK(rho[0] == doctest::Approx(3.0).epsilon(1e-14));
  }
  SUBCASE("constant row") {
    const auto C = from_linear(1, 5, std::vector<double>(5, 0.125));
    CHECK(marginal_likelihood(C, WeightVector::uniform(5))[0] == doctest::Approx(0.125).epsilon(1e-14));
  }
  SUBCASE("size mismatch") { CHECK_THROWS_AS((void)marginal_likelihood(L, WeightVector::uniform(3)), ValidationError); }
}

TEST_CASE("log-sum-exp agrees with naive summation") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-30.0, 5.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t K = 1 + rng() % 25;
    std::vector<double> logs(K);
    for (double& v : logs) v = u(rng);
    const auto w = random_simplex(rng, K);
    const LikelihoodMatrix L(1, K, logs);
    double naive = 0.0;
    for (std::size_t k = 0; k < K; ++k) naive += w[k] * std::exp(logs[k]);
    const double fast = std::exp(log_marginal_likelihood(L, w)[0]);
    REQUIRE(std::abs(fast - naive) <= 1e-10 * naive);
  }
}

TEST_CASE("log_likelihood_dd") {
  CHECK(log_likelihood_dd(from_linear(1, 1, {1.0}), WeightVector::uniform(1)) == 0.0);
  const auto L = from_linear(2, 1, {std::exp(1.0), std::exp(2.0)});
  CHECK(log_likelihood_dd(L, WeightVector::uniform(1)) == doctest::Approx(1.5).epsilon(1e-15));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-5.0, 1.0);
  std::vector<double> logs(12);
  for (double& v : logs) v = u(rng);
  const auto w = WeightVector(random_simplex(rng, 4));
  const double base = log_likelihood_dd(LikelihoodMatrix(3, 4, logs), w);
  const double c = 7.25;
  for (double& v : logs) v += std::log(c);
  CHECK(log_likelihood_dd(LikelihoodMatrix(3, 4, logs), w) == doctest::Approx(base + std::log(c)).epsilon(1e-13));
}

TEST_CASE("posterior_weights") {
  SUBCASE("non-informative datum returns the prior exactly") {
    const WeightVector w({0.5, 0.25, 0.125, 0.125});
    const std::vector<double> row(4, -3.3);
    CHECK(posterior_weights(row, w).values() == w.values());
  }
  SUBCASE("Bayes rule by hand") {
    const auto v = posterior_weights(std::vector{std::log(2.0), std::log(1.0)}, WeightVector({0.5, 0.5}));
    CHECK(v[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(v[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }
  SUBCASE("dogmatic prior") {
    const auto v = posterior_weights(std::vector{0.3, -2.0, 4.0}, WeightVector::unit(3, 1));
    CHECK(v.values() == std::vector<double>{0.0, 1.0, 0.0});
  }
  SUBCASE("zero normalizer") {
    const double ninf = -std::numeric_limits<double>::infinity();
    try {
      (void)posterior_weights(std::vector{ninf, 0.0}, WeightVector::unit(2, 0));
      FAIL("expected an error");
    } catch (const NumericalError& e) {
      CHECK(std::string(e.what()) == "measurement unsupported by prior");
    }
  }
  SUBCASE("simplex closure and zero preservation over random cases") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-700.0, 50.0);
    for (int trial = 0; trial < 2000; ++trial) {
      const std::size_t K = 1 + rng() % 30;
      auto w = random_simplex(rng, K);
      if (K > 1 && trial % 3 == 0) {
        const double dead = w[0];
        w[0] = 0.0;
        w[1] += dead;
      }
      std::vector<double> row(K);
      for (double& v : row) v = u(rng);
      const auto v = posterior_weights(row, WeightVector(w));
      double s = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        REQUIRE(v[k] >= 0.0);
        if (w[k] == 0.0) REQUIRE(v[k] == 0.0);
        s += v[k];
      }
      REQUIRE(std::abs(s - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("pushforward_l1 contraction") {
  const auto noise = NoiseModel::gaussian(1, 0.6);
  const auto grid = uniform_grid(std::vector{-12.0}, std::vector{12.0}, std::vector<std::size_t>{4800});
  const AtomSet atoms(1, {-3.0, -1.0, 0.0, 0.5, 2.5}, AtomProvenance::grid);
  const auto kernel = likelihood_matrix(ForwardModel::identity(1), noise, atoms, grid.points);

  SUBCASE("weights push forward to a density") {
    CHECK(pushforward_l1(kernel, WeightVector({0.1, 0.2, 0.3, 0.2, 0.2}).span(), grid.cell_volume) ==
          doctest::Approx(1.0).epsilon(1e-3));
  }
  SUBCASE("difference of two weight vectors") {
    const std::vector<double> a{0.1, 0.2, 0.3, 0.2, 0.2}, b{0.5, 0.0, 0.1, 0.1, 0.3};
    std::vector<double> f(5);
    double norm = 0.0;
    for (int k = 0; k < 5; ++k) norm += std::abs(f[k] = a[k] - b[k]);
    CHECK(pushforward_l1(kernel, f, grid.cell_volume) <= norm + 1e-9);
  }
  SUBCASE("zero") { CHECK(pushforward_l1(kernel, std::vector<double>(5, 0.0), grid.cell_volume) == 0.0); }
  SUBCASE("empty grid") {
    const LikelihoodMatrix empty(0, 5, {});
    CHECK_THROWS_AS((void)pushforward_l1(empty, std::vector<double>(5, 0.0), 1.0), ValidationError);
  }
  SUBCASE("random signed coefficients") {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> n01;
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> f(5);
      double norm = 0.0;
      for (double& v : f) norm += std::abs(v = n01(rng));
      REQUIRE(pushforward_l1(kernel, f, grid.cell_volume) <= norm + 1e-3);
    }
  }
}

TEST_CASE("value types validate their invariants") {
  CHECK_THROWS_AS(AtomSet(1, {}, AtomProvenance::grid), ValidationError);
  CHECK_THROWS_AS(AtomSet(1, {1.0, NAN}, AtomProvenance::grid), ValidationError);
  CHECK_THROWS_AS(WeightVector({0.5, 0.6}), ValidationError);
  CHECK_THROWS_AS(WeightVector({1.5, -0.5}), ValidationError);
  CHECK_NOTHROW(WeightVector({0.5, 0.5 + 5e-13}));
  CHECK_THROWS_AS(MeasurementSet({{"a", std::nullopt, {1.0}, {}}, {"a", std::nullopt, {2.0}, {}}}), ValidationError);
  CHECK_THROWS_AS(MeasurementSet({{"a", std::nullopt, {INFINITY}, {}}}), ValidationError);
  CHECK_NOTHROW(MeasurementSet({{"a", std::nullopt, {NAN, 1.0}, {false, true}}}));

  const auto g = AtomSet::grid_1d(1.0, 50.0, 200);
  CHECK(g.size() == 200);
  CHECK(g[0][0] == 1.0);
  CHECK(g[199][0] == 50.0);
  CHECK(g[1][0] - g[0][0] == doctest::Approx(49.0 / 199.0));
}

TEST_CASE("groups split in label order") {
  MeasurementSet data({{"a", "s2", {1.0}, {}}, {"b", "s1", {2.0}, {}}, {"c", "s2", {3.0}, {}}, {"d", std::nullopt, {4.0}, {}}});
  const auto parts = data.split_by_group();
  REQUIRE(parts.size() == 3);
  CHECK(parts.at("s2").size() == 2);
  CHECK(parts.at("s1")[0].id == "b");
  CHECK(parts.at("")[0].id == "d");
}

TEST_CASE("CSV formats round-trip") {
  SUBCASE("weighted atoms are lossless at 17 digits") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    std::vector<double> coords(3 * 40);
    for (double& v : coords) v = u(rng) * std::pow(10.0, static_cast<double>(rng() % 20) - 10.0);
    const AtomSet atoms(3, coords, AtomProvenance::grid);
    const auto w = WeightVector::normalized(random_simplex(rng, 40));
    std::istringstream in(weighted_atoms_to_csv(atoms, w));
    const auto back = weighted_atoms_from_csv(read_csv(in, "mem"));
    CHECK(back.atoms.coords() == atoms.coords());
    REQUIRE(back.weights);
    CHECK(back.weights->values() == w.values());
    CHECK(back.atoms.provenance() == AtomProvenance::file);
  }
  SUBCASE("measurements keep groups and masks") {
    std::istringstream in(
        "id,group,z_0,z_1,mask_0,mask_1\n"
        "p1,A,0.5,,1,0\n"
        "p2,,1.25,-3e-2,1,1\n");
    const auto data = measurements_from_csv(read_csv(in, "mem"));
    REQUIRE(data.size() == 2);
    CHECK(data[0].group == std::optional<std::string>("A"));
    CHECK_FALSE(data[1].group.has_value());
    CHECK(data[0].mask == Mask{true, false});
    CHECK(data[1].z[1] == -0.03);
    std::istringstream again(measurements_to_csv(data));
    const auto back = measurements_from_csv(read_csv(again, "mem"));
    CHECK(back[0].mask == data[0].mask);
    CHECK(back[1].z == data[1].z);
    CHECK(back[0].group == data[0].group);
  }
  SUBCASE("mask columns are optional") {
    std::istringstream in("id,z_0\nx,1\ny,2\n");
    const auto data = measurements_from_csv(read_csv(in, "mem"));
    CHECK(data[1].mask == Mask{true});
  }
  SUBCASE("malformed input") {
    std::istringstream bad_number("id,z_0\nx,abc\n");
    CHECK_THROWS_AS((void)measurements_from_csv(read_csv(bad_number, "mem")), ValidationError);
    std::istringstream ragged("id,z_0\nx,1,2\n");
    CHECK_THROWS_AS((void)read_csv(ragged, "mem"), ValidationError);
    std::istringstream no_z("id,group\nx,a\n");
    CHECK_THROWS_AS((void)measurements_from_csv(read_csv(no_z, "mem")), ValidationError);
  }
}
