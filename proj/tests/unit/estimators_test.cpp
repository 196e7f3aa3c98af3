#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "doctest.h"
#include "ebprior/error.hpp"
#include "ebprior/estimators/config.hpp"
#include "ebprior/estimators/dsmle.hpp"
#include "ebprior/estimators/entropy.hpp"
#include "ebprior/estimators/mple.hpp"
#include "ebprior/estimators/npmle.hpp"
#include "ebprior/estimators/simplex.hpp"

using namespace ebprior;
using namespace ebprior::core;
using namespace ebprior::estimators;

namespace {

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

double normal_pdf(double x, double mu, double sigma) {
  const double r = (x - mu) / sigma;
  return std::exp(-0.5 * r * r) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

// Random instance of a 1-D gaussian location mixture.
struct Instance {
  AtomSet atoms;
  MeasurementSet data;
  NoiseModel noise;
};

Instance random_instance(std::mt19937_64& rng, std::size_t K, std::size_t M) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::normal_distribution<double> n01;
  std::vector<double> x(K), z(M);
  for (double& v : x) v = u(rng);
  for (double& v : z) v = u(rng) + 0.5 * n01(rng);
  const double sigma = 0.3 + 0.7 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  return {AtomSet(1, x, AtomProvenance::grid), MeasurementSet::from_points(1, z), NoiseModel::gaussian(1, sigma)};
}

}  // namespace

TEST_CASE("npmle_step examples") {
  SUBCASE("single atom") {
    const auto L = from_linear(3, 1, {0.2, 1.5, 3.0});
    CHECK(npmle_step(L, WeightVector::uniform(1)).values() == std::vector<double>{1.0});
  }
  SUBCASE("one-step hand computation") {
    const auto w = npmle_step(from_linear(1, 2, {1.0, 3.0}), WeightVector({0.5, 0.5}));
    CHECK(w[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(w[1] == doctest::Approx(0.75).epsilon(1e-15));
  }
  SUBCASE("indistinguishable atoms keep their weights") {
    const auto L = from_linear(3, 3, {0.5, 0.5, 0.5, 2.0, 2.0, 2.0, 0.1, 0.1, 0.1});
    const WeightVector w({0.2, 0.3, 0.5});
    const auto next = npmle_step(L, w);
    for (std::size_t k = 0; k < 3; ++k) CHECK(next[k] == doctest::Approx(w[k]).epsilon(1e-15));
  }
  SUBCASE("size mismatch") {
    CHECK_THROWS_AS((void)npmle_step(from_linear(1, 2, {1.0, 3.0}), WeightVector::uniform(3)), ValidationError);
  }
}

TEST_CASE("EM monotonicity and support preservation on random instances") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t K = 1 + rng() % 20;
    const std::size_t M = 1 + rng() % 50;
    const auto inst = random_instance(rng, K, M);
    const auto L = likelihood_matrix(ForwardModel::identity(1), inst.noise, inst.atoms, inst.data);
    auto w = random_simplex(rng, K);
    if (K > 2) {
      w[1] += w[0];
      w[0] = 0.0;
    }
    WeightVector current(w);
    for (int step = 0; step < 5; ++step) {
      const auto next = npmle_step(L, current);
      REQUIRE(log_likelihood_dd(L, next) >= log_likelihood_dd(L, current) - 1e-12);
      if (K > 2) REQUIRE(next[0] == 0.0);
      current = next;
    }
  }
}

TEST_CASE("npmle_run termination") {
  std::mt19937_64 rng(1);
  const auto inst = random_instance(rng, 5, 30);
  const auto L = likelihood_matrix(ForwardModel::identity(1), inst.noise, inst.atoms, inst.data);
  const auto w0 = WeightVector::uniform(5);

  SUBCASE("infinite tolerance stops after one step") {
    const auto t = npmle_run(L, w0, 100, std::numeric_limits<double>::infinity());
    CHECK(t.reason == Termination::tol);
    CHECK(t.iterations() == 1);
  }
  SUBCASE("zero iterations return the start") {
    const auto t = npmle_run(L, w0, 0, 1e-9);
    CHECK(t.reason == Termination::max_iter);
    CHECK(t.final_weights.values() == w0.values());
    REQUIRE(t.records.size() == 1);
    CHECK(t.records[0].objective == doctest::Approx(30.0 * log_likelihood_dd(L, w0)));
  }
  SUBCASE("objective never decreases") {
    const auto t = npmle_run(L, w0, 300, 0.0);
    CHECK(t.reason == Termination::max_iter);
    for (std::size_t i = 1; i < t.records.size(); ++i) {
      REQUIRE(t.records[i].objective >= t.records[i - 1].objective - 1e-12 * std::abs(t.records[i - 1].objective));
    }
  }
}

TEST_CASE("npmle_run recovers a two-atom mixture (direct EM oracle)") {
  // Oracle: textbook EM for a two-component gaussian mixture with known
  // components, written in linear space.
  const double mu0 = -1.0, mu1 = 2.0, sigma = 1.0, p_true = 0.3;
  const std::size_t M = 10000;
  std::mt19937_64 rng(77);
  std::bernoulli_distribution coin(p_true);
  std::normal_distribution<double> n01;
  std::vector<double> z(M);
  std::size_t first = 0;
  for (double& v : z) {
    const bool a = coin(rng);
    first += a ? 1 : 0;
    v = (a ? mu0 : mu1) + sigma * n01(rng);
  }
  const double empirical = static_cast<double>(first) / static_cast<double>(M);

  double p = 0.5;
  for (int it = 0; it < 5000; ++it) {
    double acc = 0.0;
    for (double v : z) {
      const double a = p * normal_pdf(v, mu0, sigma);
      acc += a / (a + (1.0 - p) * normal_pdf(v, mu1, sigma));
    }
    const double next = acc / static_cast<double>(M);
    if (std::abs(next - p) < 1e-14) break;
    p = next;
  }

  const auto L = likelihood_matrix(ForwardModel::identity(1), NoiseModel::gaussian(1, sigma),
                                   AtomSet(1, {mu0, mu1}, AtomProvenance::grid), MeasurementSet::from_points(1, z));
  const auto t = npmle_run(L, WeightVector::uniform(2), 5000, 1e-13);
  CHECK(t.final_weights[0] == doctest::Approx(p).epsilon(1e-8));
  CHECK(std::abs(t.final_weights[0] - empirical) + std::abs(t.final_weights[1] - (1.0 - empirical)) < 0.05);
}

TEST_CASE("npmle is permutation equivariant") {
  std::mt19937_64 rng(8);
  const auto inst = random_instance(rng, 7, 40);
  const auto L = likelihood_matrix(ForwardModel::identity(1), inst.noise, inst.atoms, inst.data);
  std::vector<std::size_t> order(7);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const auto Lp = likelihood_matrix(ForwardModel::identity(1), inst.noise, inst.atoms.permuted(order), inst.data);
  const auto w0 = random_simplex(rng, 7);
  std::vector<double> w0p(7);
  for (std::size_t k = 0; k < 7; ++k) w0p[k] = w0[order[k]];
  const auto a = npmle_run(L, WeightVector(w0), 50, 0.0).final_weights;
  const auto b = npmle_run(Lp, WeightVector::normalized(w0p), 50, 0.0).final_weights;
  for (std::size_t k = 0; k < 7; ++k) CHECK(b[k] == doctest::Approx(a[order[k]]).epsilon(1e-12));
}

TEST_CASE("true prior is a fixed point of the quadrature iteration") {
  const AtomSet atoms(1, {-2.0, -0.5, 1.0, 2.5}, AtomProvenance::grid);
  const auto noise = NoiseModel::gaussian(1, 0.8);
  const auto grid = uniform_grid(std::vector{-10.0}, std::vector{10.0}, std::vector<std::size_t>{8000});
  const auto kernel = likelihood_matrix(ForwardModel::identity(1), noise, atoms, grid.points);
  const WeightVector truth({0.1, 0.4, 0.2, 0.3});

  // rho_Z(z_g) * cell volume as measurement weights turns npmle_step into the
  // data-continuous iteration.
  const auto lr = log_marginal_likelihood(kernel, truth.span());
  std::vector<double> c(lr.size());
  for (std::size_t g = 0; g < lr.size(); ++g) c[g] = std::exp(lr[g]) * grid.cell_volume;

  CHECK(l1_distance(npmle_step(kernel, truth, c).span(), truth.span()) < 1e-6);
  const WeightVector perturbed({0.15, 0.35, 0.2, 0.3});
  CHECK(l1_distance(npmle_step(kernel, perturbed, c).span(), perturbed.span()) > 1e-3);
}

TEST_CASE("simplex_project") {
  SUBCASE("points on the simplex are unchanged") {
    const std::vector<double> v{0.5, 0.25, 0.125, 0.125};
    CHECK(simplex_project(v).values() == v);
  }
  SUBCASE("hand computation") {
    const auto w = simplex_project(std::vector{1.0, 0.5});
    CHECK(w[0] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(w[1] == doctest::Approx(0.25).epsilon(1e-15));
  }
  SUBCASE("active nonnegativity constraint") {
    CHECK(simplex_project(std::vector{2.0, -1.0}).values() == std::vector<double>{1.0, 0.0});
  }
  SUBCASE("non-finite input") {
    CHECK_THROWS_AS((void)simplex_project(std::vector<double>{1.0, NAN}), ValidationError);
    CHECK_THROWS_AS((void)simplex_project(std::vector<double>{INFINITY}), ValidationError);
  }
  SUBCASE("idempotent and 1-Lipschitz") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> n01;
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t K = 1 + rng() % 15;
      std::vector<double> a(K), b(K);
      for (double& x : a) x = 2.0 * n01(rng);
      for (double& x : b) x = 2.0 * n01(rng);
      const auto pa = simplex_project(a);
      const auto pb = simplex_project(b);
      const auto ppa = simplex_project(pa.span());
      for (std::size_t k = 0; k < K; ++k) REQUIRE(std::abs(ppa[k] - pa[k]) <= 1e-15);
      double dp = 0.0, dv = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        dp += (pa[k] - pb[k]) * (pa[k] - pb[k]);
        dv += (a[k] - b[k]) * (a[k] - b[k]);
      }
      REQUIRE(std::sqrt(dp) <= std::sqrt(dv) + 1e-12);
      // optimality: no simplex vertex is closer to a than the projection
      double best = 0.0;
      for (std::size_t k = 0; k < K; ++k) best += (pa[k] - a[k]) * (pa[k] - a[k]);
      for (std::size_t j = 0; j < K; ++j) {
        double d = 0.0;
        for (std::size_t k = 0; k < K; ++k) d += ((k == j ? 1.0 : 0.0) - a[k]) * ((k == j ? 1.0 : 0.0) - a[k]);
        REQUIRE(best <= d + 1e-12);
      }
    }
  }
}

TEST_CASE("z_entropy Monte-Carlo estimates") {
  const double sigma = 0.7;
  const auto noise = NoiseModel::gaussian(1, sigma);
  const double gaussian_entropy = 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * sigma * sigma);
  auto rng = make_stream(5, "entropy-test");

  SUBCASE("single atom") {
    const auto images = evaluate_model(ForwardModel::identity(1), AtomSet(1, {1.0}, AtomProvenance::grid));
    const auto w = WeightVector::uniform(1);
    const auto pts = sample_mixture(images, noise, w, 10000, rng);
    const auto est = z_entropy(likelihood_matrix(images, noise, pts), w);
    CHECK(est.samples == 10000);
    CHECK(std::abs(est.value - gaussian_entropy) < 3.0 * est.std_error);
  }
  SUBCASE("two far-separated atoms add ln 2") {
    const auto images = evaluate_model(ForwardModel::identity(1), AtomSet(1, {-50.0, 50.0}, AtomProvenance::grid));
    const auto w = WeightVector::uniform(2);
    const auto pts = sample_mixture(images, noise, w, 10000, rng);
    const auto est = z_entropy(likelihood_matrix(images, noise, pts), w);
    CHECK(std::abs(est.value - (gaussian_entropy + std::log(2.0))) < 3.0 * est.std_error);
  }
  SUBCASE("one point at the mode") {
    const auto images = evaluate_model(ForwardModel::identity(1), AtomSet(1, {0.0}, AtomProvenance::grid));
    const auto est = z_entropy(likelihood_matrix(images, noise, std::vector{0.0}), WeightVector::uniform(1));
    CHECK(est.value == doctest::Approx(-noise.log_density(std::vector{0.0})).epsilon(1e-15));
    CHECK(est.samples == 1);
  }
  SUBCASE("no samples") {
    CHECK_THROWS_AS((void)z_entropy(LikelihoodMatrix(0, 1, {}), WeightVector::uniform(1)), ValidationError);
  }
}

TEST_CASE("mple_gradient") {
  SUBCASE("penalty off gives the exact data gradient") {
    const auto L = from_linear(2, 3, {1.0, 2.0, 4.0, 0.5, 0.5, 3.0});
    const WeightVector w({0.25, 0.25, 0.5});
    const auto g = mple_gradient(L, LikelihoodMatrix(1, 3, {0.0, 0.0, 0.0}), w, 0.0);
    const double rho0 = 0.25 + 0.5 + 2.0, rho1 = 0.125 + 0.125 + 1.5;
    CHECK(g[0] == doctest::Approx(1.0 / rho0 + 0.5 / rho1).epsilon(1e-14));
    CHECK(g[1] == doctest::Approx(2.0 / rho0 + 0.5 / rho1).epsilon(1e-14));
    CHECK(g[2] == doctest::Approx(4.0 / rho0 + 3.0 / rho1).epsilon(1e-14));
  }
  SUBCASE("identical columns give identical components") {
    const auto L = from_linear(2, 3, {1.0, 1.0, 1.0, 0.5, 0.5, 0.5});
    const auto E = from_linear(3, 3, {0.2, 0.2, 0.2, 1.1, 1.1, 1.1, 0.7, 0.7, 0.7});
    const auto g = mple_gradient(L, E, WeightVector({0.2, 0.3, 0.5}), 4.0);
    CHECK(g[1] == doctest::Approx(g[0]).epsilon(1e-14));
    CHECK(g[2] == doctest::Approx(g[0]).epsilon(1e-14));
  }
  SUBCASE("quadrature gradient matches central differences") {
    // Oracle objective in linear space: sum_m log rho_m - gamma * sum_g vol rho_g log rho_g.
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> u(-2.0, 2.0), s(0.5, 1.0), gam(1.0, 50.0);
    for (int trial = 0; trial < 20; ++trial) {
      const double sigma = s(rng), gamma = gam(rng);
      std::vector<double> x(3), z(10);
      for (double& v : x) v = u(rng);
      for (double& v : z) v = u(rng);
      auto w = random_simplex(rng, 3);
      for (double& v : w) v = 0.05 + 0.85 * v;
      const auto grid = uniform_grid(std::vector{-12.0}, std::vector{12.0}, std::vector<std::size_t>{4000});
      const AtomSet atoms(1, x, AtomProvenance::grid);
      const auto data = likelihood_matrix(ForwardModel::identity(1), NoiseModel::gaussian(1, sigma), atoms,
                                          MeasurementSet::from_points(1, z));
      const auto kernel = likelihood_matrix(ForwardModel::identity(1), NoiseModel::gaussian(1, sigma), atoms, grid.points);
      const auto rule = quadrature_rule(kernel, grid.cell_volume);
      const auto g = mple_gradient(&data, &rule, w, gamma);

      const auto objective = [&](const std::vector<double>& v) {
        double a = 0.0;
        for (double zm : z) {
          double r = 0.0;
          for (int k = 0; k < 3; ++k) r += v[k] * normal_pdf(zm, x[k], sigma);
          a += std::log(r);
        }
        double h = 0.0;
        for (std::size_t p = 0; p < grid.points.size(); ++p) {
          const double zg = grid.points[p].z[0];
          double r = 0.0;
          for (int k = 0; k < 3; ++k) r += v[k] * normal_pdf(zg, x[k], sigma);
          if (r > 0.0) h -= grid.cell_volume * r * std::log(r);
        }
        return a + gamma * h;
      };
      for (int k = 0; k < 3; ++k) {
        const double step = 1e-6;
        auto up = w, down = w;
        up[k] += step;
        down[k] -= step;
        const double fd = (objective(up) - objective(down)) / (2.0 * step);
        REQUIRE(g[k] == doctest::Approx(fd).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("dsmle_prepare") {
  const MeasurementSet data({{"a", "g1", {0.5, 1.0}, {}}, {"b", std::nullopt, {2.0, 7.0}, {true, false}}});
  const auto noise = NoiseModel::gaussian(2, 1.0);

  SUBCASE("zero bandwidth copies the data") {
    const auto p = dsmle_prepare(data, noise, {0.0, 3, 1});
    REQUIRE(p.data.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) CHECK(p.data[i].z == data[i / 3].z);
    CHECK(p.noise.gaussian_sigma()[0] == 1.0);
    CHECK(p.data[0].id == "a#0");
    CHECK(p.data[0].group == std::optional<std::string>("g1"));
    CHECK(p.data[4].mask == Mask{true, false});
  }
  SUBCASE("gaussian convolution widens the noise") {
    const auto p = dsmle_prepare(data, noise, {1.0, 2, 1});
    CHECK(p.noise.gaussian_sigma()[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(p.noise.gaussian_sigma()[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(p.data[3].z[1] == 7.0);  // unobserved coordinate untouched
  }
  SUBCASE("default bandwidth is the noise sigma") {
    const auto p = dsmle_prepare(data, NoiseModel::gaussian(std::vector{0.5, 2.0}), {std::nullopt, 1, 1});
    CHECK(p.noise.gaussian_sigma()[0] == doctest::Approx(0.5 * std::sqrt(2.0)));
    CHECK(p.noise.gaussian_sigma()[1] == doctest::Approx(2.0 * std::sqrt(2.0)));
  }
  SUBCASE("fixed seed is deterministic") {
    const auto a = dsmle_prepare(data, noise, {0.3, 1, 42});
    const auto b = dsmle_prepare(data, noise, {0.3, 1, 42});
    const auto c = dsmle_prepare(data, noise, {0.3, 1, 43});
    for (std::size_t i = 0; i < a.data.size(); ++i) CHECK(a.data[i].z == b.data[i].z);
    CHECK(a.data[0].z != c.data[0].z);
  }
  SUBCASE("non-gaussian noise is unsupported") {
    const auto laplace = NoiseModel::factorized(
        2, [](std::size_t, double r) { return -std::abs(r) - std::log(2.0); },
        [](Rng&, std::span<double> out) { std::fill(out.begin(), out.end(), 0.0); });
    CHECK_THROWS_AS((void)dsmle_prepare(data, laplace, {}), ValidationError);
  }
  SUBCASE("invalid configuration") {
    CHECK_THROWS_AS((void)dsmle_prepare(data, noise, {-1.0, 2, 1}), ValidationError);
    CHECK_THROWS_AS((void)dsmle_prepare(data, noise, {1.0, 0, 1}), ValidationError);
  }
}

TEST_CASE("mple_run") {
  SUBCASE("without penalty it reaches the NPMLE optimum") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> n01;
    const AtomSet atoms(1, {-2.0, 0.0, 2.5}, AtomProvenance::grid);
    std::vector<double> z(60);
    for (std::size_t m = 0; m < z.size(); ++m) z[m] = atoms[m % 3][0] + 0.6 * n01(rng);
    const auto noise = NoiseModel::gaussian(1, 0.6);
    const auto L = likelihood_matrix(ForwardModel::identity(1), noise, atoms, MeasurementSet::from_points(1, z));
    const auto em = npmle_run(L, WeightVector::uniform(3), 20000, 1e-15);
    MpleConfig cfg;
    cfg.gamma = 0.0;
    cfg.max_iter = 20000;
    cfg.tol = 1e-15;
    const auto pg = mple_run(L, atoms, ForwardModel::identity(1), noise, WeightVector::uniform(3), cfg, 1);
    CHECK(std::abs(log_likelihood_dd(L, pg.final_weights) - log_likelihood_dd(L, em.final_weights)) < 1e-6);
    for (std::size_t i = 1; i < pg.records.size(); ++i) REQUIRE(pg.records[i].objective >= pg.records[i - 1].objective);
  }
  SUBCASE("zero iterations return the start") {
    const auto L = from_linear(1, 2, {1.0, 2.0});
    MpleConfig cfg;
    cfg.gamma = 3.0;
    cfg.max_iter = 0;
    const auto w0 = WeightVector({0.25, 0.75});
    const auto t = mple_run(L, AtomSet(1, {0.0, 1.0}, AtomProvenance::grid), ForwardModel::identity(1),
                            NoiseModel::gaussian(1, 1.0), w0, cfg, 3);
    CHECK(t.final_weights.values() == w0.values());
    CHECK(t.reason == Termination::max_iter);
  }
  SUBCASE("gamma is required") {
    const auto L = from_linear(1, 2, {1.0, 2.0});
    CHECK_THROWS_WITH_AS((void)mple_run(L, AtomSet(1, {0.0, 1.0}, AtomProvenance::grid), ForwardModel::identity(1),
                                        NoiseModel::gaussian(1, 1.0), WeightVector::uniform(2), MpleConfig{}, 3),
                         doctest::Contains("gamma"), ValidationError);
  }
  SUBCASE("same seed, same trace") {
    const AtomSet atoms(1, {-1.0, 0.0, 1.5, 3.0}, AtomProvenance::grid);
    const auto noise = NoiseModel::gaussian(1, 0.5);
    const auto L = likelihood_matrix(ForwardModel::identity(1), noise, atoms,
                                     MeasurementSet::from_points(1, std::vector{-0.8, 0.1, 1.2, 2.9, 3.3}));
    MpleConfig cfg;
    cfg.gamma = 2.0;
    cfg.max_iter = 30;
    const auto a = mple_run(L, atoms, ForwardModel::identity(1), noise, WeightVector::uniform(4), cfg, 9);
    const auto b = mple_run(L, atoms, ForwardModel::identity(1), noise, WeightVector::uniform(4), cfg, 9);
    CHECK(trace_to_csv(a) == trace_to_csv(b));
    CHECK(a.final_weights.values() == b.final_weights.values());
  }
}

TEST_CASE("reference_prior_run") {
  const auto noise = NoiseModel::gaussian(1, 0.5);
  MpleConfig cfg;
  cfg.max_iter = 50;
  SUBCASE("single atom") {
    const auto t = reference_prior_run(AtomSet(1, {0.3}, AtomProvenance::grid), ForwardModel::identity(1), noise,
                                       WeightVector::uniform(1), cfg, 1);
    CHECK(t.final_weights.values() == std::vector<double>{1.0});
    CHECK(t.iterations() <= 1);
  }
  SUBCASE("identical atoms share their weight") {
    for (std::size_t iters : {1u, 2u, 5u, 20u}) {
      cfg.max_iter = iters;
      const auto t = reference_prior_run(AtomSet(1, {0.0, 0.0, 2.0}, AtomProvenance::grid), ForwardModel::identity(1),
                                         noise, WeightVector({0.2, 0.2, 0.6}), cfg, 4);
      CHECK(t.final_weights[0] == t.final_weights[1]);
    }
  }
  SUBCASE("spreads mass toward the edges of a cluster") {
    const AtomSet atoms = AtomSet::grid_1d(-1.0, 1.0, 9);
    cfg.max_iter = 200;
    const auto images = evaluate_model(ForwardModel::identity(1), atoms);
    const auto t = reference_prior_run(images, noise, WeightVector::uniform(9), cfg, 2);
    const auto grid = uniform_grid(std::vector{-6.0}, std::vector{6.0}, std::vector<std::size_t>{3000});
    const auto kernel = likelihood_matrix(images, noise, grid.points);
    const auto rule = quadrature_rule(kernel, grid.cell_volume);
    CHECK(z_entropy(rule, t.final_weights.span()) > z_entropy(rule, WeightVector::uniform(9).span()));
    CHECK(t.final_weights[0] > t.final_weights[4]);
  }
}

TEST_CASE("estimator config file") {
  SUBCASE("reads every section") {
    std::istringstream in(
        "[npmle]\nmax_iter = 300\ntol = 1e-10\n"
        "[dsmle]\nbandwidth = 0.02\nsamples = 4\nseed = 7\n"
        "[mple]\ngamma = 49\nsamples = 128\nstep = 0.5\nbacktrack = 0.25\nmax_iter = 40\ntol = 1e-8\n");
    auto file = ConfigFile::parse(in, "mem");
    const auto cfg = read_estimator_config(file);
    CHECK(cfg.npmle.max_iter == 300);
    CHECK(cfg.npmle.tol == 1e-10);
    CHECK(cfg.dsmle.bandwidth == std::optional<double>(0.02));
    CHECK(cfg.dsmle.samples == 4);
    CHECK(cfg.dsmle.seed == 7);
    CHECK(cfg.mple.gamma == std::optional<double>(49.0));
    CHECK(cfg.mple.samples == std::optional<std::size_t>(128));
    CHECK(cfg.mple.backtrack == 0.25);
    CHECK(cfg.mple.max_iter == 40);
    CHECK_NOTHROW(file.finish());
  }
  SUBCASE("unknown keys are errors") {
    std::istringstream in("[mple]\ngama = 49\n");
    auto file = ConfigFile::parse(in, "mem");
    CHECK_THROWS_WITH_AS((void)read_estimator_config(file), doctest::Contains("gama"), ValidationError);
  }
  SUBCASE("bad values are errors") {
    std::istringstream in("[mple]\ngamma = -1\n");
    auto file = ConfigFile::parse(in, "mem");
    CHECK_THROWS_AS((void)read_estimator_config(file), ValidationError);
    std::istringstream in2("[npmle]\nmax_iter = lots\n");
    auto file2 = ConfigFile::parse(in2, "mem");
    CHECK_THROWS_AS((void)read_estimator_config(file2), ValidationError);
  }
}

TEST_CASE("trace CSV") {
  IterationTrace t{{{0, -1.5, 0.0}, {1, -1.25, 0.125}}, WeightVector::uniform(2), Termination::max_iter};
  CHECK(trace_to_csv(t) == "iter,objective,w_delta_l1\n0,-1.5,0\n1,-1.25,0.125\n");
  CHECK(to_string(Termination::tol) == "tol");
}
