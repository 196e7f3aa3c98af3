#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "ebprior/core/atoms.hpp"
#include "ebprior/core/measurements.hpp"
#include "ebprior/core/model.hpp"

namespace ebprior::core {

/// phi(x_k) for every atom, K x n row-major. Computed once per AtomSet and
/// reused for every likelihood evaluation against new measurement points.
struct AtomImages {
  std::size_t dim_obs = 0;
  std::vector<double> values;

  std::size_t size() const { return dim_obs == 0 ? 0 : values.size() / dim_obs; }
  std::span<const double> operator[](std::size_t k) const {
    return {values.data() + k * dim_obs, dim_obs};
  }
};

/// Throws NumericalError naming the atom index on non-finite model output.
AtomImages evaluate_model(const ForwardModel& model, const AtomSet& atoms);

/// L[m][k] = rho_Z(z_m | X = x_k), kept in log space. Entries are floored at
/// kLogFloor so no atom is ever assigned an exact zero likelihood. Each row
/// also keeps exp(log L - row max) for fast mixture sums.
class LikelihoodMatrix {
 public:
  static constexpr double kLogFloor = -700.0;

  LikelihoodMatrix(std::size_t rows, std::size_t cols, std::vector<double> log_values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double log_at(std::size_t m, std::size_t k) const { return log_[m * cols_ + k]; }
  std::span<const double> log_row(std::size_t m) const { return {log_.data() + m * cols_, cols_}; }
  /// exp(log L[m][k] - row_log_max(m)); the row maximum maps to 1.
  std::span<const double> scaled_row(std::size_t m) const { return {scaled_.data() + m * cols_, cols_}; }
  double row_log_max(std::size_t m) const { return row_max_[m]; }

  /// log sum_k w_k L[m][k] by log-sum-exp.
  double log_mixture(std::size_t m, std::span<const double> w) const;

  /// Sources this matrix was built from; null when built from raw values.
  const std::shared_ptr<const AtomSet>& atoms() const { return atoms_; }
  const std::shared_ptr<const MeasurementSet>& measurements() const { return measurements_; }
  void attach_sources(std::shared_ptr<const AtomSet> atoms, std::shared_ptr<const MeasurementSet> data);

  LikelihoodMatrix permuted_columns(std::span<const std::size_t> order) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> log_;
  std::vector<double> scaled_;
  std::vector<double> row_max_;
  std::shared_ptr<const AtomSet> atoms_;
  std::shared_ptr<const MeasurementSet> measurements_;
};

LikelihoodMatrix likelihood_matrix(const ForwardModel& model, const NoiseModel& noise, const AtomSet& atoms,
                                   const MeasurementSet& data);

LikelihoodMatrix likelihood_matrix(const AtomImages& images, const NoiseModel& noise, const MeasurementSet& data);

/// Fully observed points (J x n row-major); used for entropy samples.
LikelihoodMatrix likelihood_matrix(const AtomImages& images, const NoiseModel& noise,
                                   std::span<const double> points);

/// rho_Z(z_m | W = w) for every row.
std::vector<double> marginal_likelihood(const LikelihoodMatrix& L, const WeightVector& w);
std::vector<double> log_marginal_likelihood(const LikelihoodMatrix& L, std::span<const double> w);

/// (1/M) sum_m log rho_Z(z_m | W = w).
double log_likelihood_dd(const LikelihoodMatrix& L, const WeightVector& w);
double log_likelihood_dd(const LikelihoodMatrix& L, std::span<const double> w);

/// Individual posterior v*_k = w_k L_k / sum_j w_j L_j from a row of log
/// likelihoods. Throws NumericalError when the prior gives the datum zero mass.
WeightVector posterior_weights(std::span<const double> log_row, const WeightVector& w);

/// L1 norm of z -> sum_k f_k rho_Z(z | X = x_k) by midpoint quadrature, with
/// `kernel` evaluated on the grid points (rows) for every atom (columns).
double pushforward_l1(const LikelihoodMatrix& kernel, std::span<const double> f, double cell_volume);

}  // namespace ebprior::core
