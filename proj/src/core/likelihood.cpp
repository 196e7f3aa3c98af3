#include "ebprior/core/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "ebprior/error.hpp"
#include "ebprior/parallel.hpp"

namespace ebprior::core {

namespace {

void check_weights(const LikelihoodMatrix& L, std::size_t k) {
  if (L.cols() != k) {
    throw ValidationError(fmt::format("likelihood matrix has {} atoms but weight vector has {}", L.cols(), k));
  }
}

}  // namespace

AtomImages evaluate_model(const ForwardModel& model, const AtomSet& atoms) {
  if (model.dim_param() != atoms.dim()) {
    throw ValidationError(fmt::format("forward model '{}' expects {} parameters, atoms have {}", model.name(),
                                      model.dim_param(), atoms.dim()));
  }
  AtomImages images{model.dim_obs(), std::vector<double>(atoms.size() * model.dim_obs())};
  parallel_for(atoms.size(), [&](std::size_t k) {
    std::span<double> out(images.values.data() + k * images.dim_obs, images.dim_obs);
    model.eval(atoms[k], out);
    for (double v : out) {
      if (!std::isfinite(v)) {
        throw NumericalError(fmt::format("forward model '{}' returned a non-finite value at atom {}", model.name(), k));
      }
    }
  });
  return images;
}

LikelihoodMatrix::LikelihoodMatrix(std::size_t rows, std::size_t cols, std::vector<double> log_values)
    : rows_(rows), cols_(cols), log_(std::move(log_values)) {
  if (cols_ == 0) throw ValidationError("likelihood matrix: no atoms");
  if (log_.size() != rows_ * cols_) {
    throw ValidationError(fmt::format("likelihood matrix: {} values for shape {} x {}", log_.size(), rows_, cols_));
  }
  scaled_.resize(log_.size());
  row_max_.resize(rows_);
  for (std::size_t m = 0; m < rows_; ++m) {
    double* row = log_.data() + m * cols_;
    double mx = kLogFloor;
    for (std::size_t k = 0; k < cols_; ++k) {
      if (std::isnan(row[k]) || row[k] == std::numeric_limits<double>::infinity()) {
        throw NumericalError(fmt::format("likelihood matrix: entry ({}, {}) is {}", m, k, row[k]));
      }
      row[k] = std::max(row[k], kLogFloor);
      mx = std::max(mx, row[k]);
    }
    row_max_[m] = mx;
    double* s = scaled_.data() + m * cols_;
    for (std::size_t k = 0; k < cols_; ++k) s[k] = std::exp(row[k] - mx);
  }
}

double LikelihoodMatrix::log_mixture(std::size_t m, std::span<const double> w) const {
  const auto s = scaled_row(m);
  double acc = 0.0;
  for (std::size_t k = 0; k < cols_; ++k) acc += w[k] * s[k];
  if (acc > 1e-280) return row_max_[m] + std::log(acc);
  // Mass sits only on atoms far below the row maximum; redo in full log space.
  const auto l = log_row(m);
  double a = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < cols_; ++k) {
    if (w[k] > 0.0) a = std::max(a, std::log(w[k]) + l[k]);
  }
  if (!std::isfinite(a)) return a;
  double sum = 0.0;
  for (std::size_t k = 0; k < cols_; ++k) {
    if (w[k] > 0.0) sum += std::exp(std::log(w[k]) + l[k] - a);
  }
  return a + std::log(sum);
}

void LikelihoodMatrix::attach_sources(std::shared_ptr<const AtomSet> atoms,
                                      std::shared_ptr<const MeasurementSet> data) {
  atoms_ = std::move(atoms);
  measurements_ = std::move(data);
}

LikelihoodMatrix LikelihoodMatrix::permuted_columns(std::span<const std::size_t> order) const {
  if (order.size() != cols_) throw ValidationError("column permutation: size mismatch");
  std::vector<double> out(log_.size());
  for (std::size_t m = 0; m < rows_; ++m) {
    for (std::size_t k = 0; k < cols_; ++k) out[m * cols_ + k] = log_[m * cols_ + order[k]];
  }
  return LikelihoodMatrix(rows_, cols_, std::move(out));
}

LikelihoodMatrix likelihood_matrix(const ForwardModel& model, const NoiseModel& noise, const AtomSet& atoms,
                                   const MeasurementSet& data) {
  auto L = likelihood_matrix(evaluate_model(model, atoms), noise, data);
  L.attach_sources(std::make_shared<const AtomSet>(atoms), std::make_shared<const MeasurementSet>(data));
  return L;
}

LikelihoodMatrix likelihood_matrix(const AtomImages& images, const NoiseModel& noise, const MeasurementSet& data) {
  const std::size_t n = data.dim();
  if (images.dim_obs != n || noise.dim() != n) {
    throw ValidationError(fmt::format("dimension mismatch: model output {}, noise {}, measurements {}",
                                      images.dim_obs, noise.dim(), n));
  }
  if (data.any_masked() && !noise.mask_support()) {
    throw ValidationError("masked measurements require a per-coordinate (factorized) noise density");
  }
  for (const auto& r : data.records()) {
    if (r.observed_count() == 0) throw ValidationError(fmt::format("measurement '{}' has no observed coordinate", r.id));
  }
  const std::size_t M = data.size();
  const std::size_t K = images.size();
  std::vector<double> logs(M * K);
  parallel_for(M, [&](std::size_t m) {
    const auto& rec = data[m];
    const Mask* mask = rec.observed_count() == n ? nullptr : &rec.mask;
    std::vector<double> residual(n);
    for (std::size_t k = 0; k < K; ++k) {
      const auto y = images[k];
      for (std::size_t i = 0; i < n; ++i) residual[i] = rec.z[i] - y[i];
      logs[m * K + k] = noise.log_density(residual, mask);
    }
  });
  return LikelihoodMatrix(M, K, std::move(logs));
}

LikelihoodMatrix likelihood_matrix(const AtomImages& images, const NoiseModel& noise,
                                   std::span<const double> points) {
  const std::size_t n = images.dim_obs;
  if (noise.dim() != n || points.size() % n != 0) throw ValidationError("likelihood matrix: dimension mismatch");
  const std::size_t J = points.size() / n;
  const std::size_t K = images.size();
  std::vector<double> logs(J * K);
  parallel_for(J, [&](std::size_t j) {
    std::vector<double> residual(n);
    for (std::size_t k = 0; k < K; ++k) {
      const auto y = images[k];
      for (std::size_t i = 0; i < n; ++i) residual[i] = points[j * n + i] - y[i];
      logs[j * K + k] = noise.log_density(residual);
    }
  });
  return LikelihoodMatrix(J, K, std::move(logs));
}

std::vector<double> log_marginal_likelihood(const LikelihoodMatrix& L, std::span<const double> w) {
  check_weights(L, w.size());
  std::vector<double> out(L.rows());
  for (std::size_t m = 0; m < L.rows(); ++m) out[m] = L.log_mixture(m, w);
  return out;
}

std::vector<double> marginal_likelihood(const LikelihoodMatrix& L, const WeightVector& w) {
  auto out = log_marginal_likelihood(L, w.span());
  for (double& v : out) v = std::exp(v);
  return out;
}

double log_likelihood_dd(const LikelihoodMatrix& L, std::span<const double> w) {
  if (L.rows() == 0) throw ValidationError("log likelihood: no measurements");
  const auto lm = log_marginal_likelihood(L, w);
  double acc = 0.0;
  for (double v : lm) acc += v;
  return acc / static_cast<double>(L.rows());
}

double log_likelihood_dd(const LikelihoodMatrix& L, const WeightVector& w) { return log_likelihood_dd(L, w.span()); }

WeightVector posterior_weights(std::span<const double> log_row, const WeightVector& w) {
  if (log_row.size() != w.size()) {
    throw ValidationError(fmt::format("posterior weights: {} likelihoods for {} atoms", log_row.size(), w.size()));
  }
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (std::isnan(log_row[k])) throw NumericalError("posterior weights: NaN likelihood");
    if (w[k] > 0.0) mx = std::max(mx, log_row[k]);
  }
  if (!std::isfinite(mx)) throw NumericalError("measurement unsupported by prior");
  std::vector<double> v(w.size());
  double norm = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    v[k] = w[k] > 0.0 ? w[k] * std::exp(log_row[k] - mx) : 0.0;
    norm += v[k];
  }
  if (!(norm > 0.0)) throw NumericalError("measurement unsupported by prior");
  for (double& x : v) x /= norm;
  return WeightVector(std::move(v));
}

double pushforward_l1(const LikelihoodMatrix& kernel, std::span<const double> f, double cell_volume) {
  if (kernel.rows() == 0) throw ValidationError("pushforward: empty quadrature grid");
  if (kernel.cols() != f.size()) throw ValidationError("pushforward: coefficient count does not match atoms");
  double acc = 0.0;
  for (std::size_t g = 0; g < kernel.rows(); ++g) {
    const auto l = kernel.log_row(g);
    double v = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
      if (f[k] != 0.0) v += f[k] * std::exp(l[k]);
    }
    acc += std::abs(v);
  }
  return acc * cell_volume;
}

}  // namespace ebprior::core
