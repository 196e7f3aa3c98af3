#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ebprior/core/atoms.hpp"

namespace ebprior::estimators {

enum class Termination { max_iter, tol, error };

std::string to_string(Termination t);

struct TraceRecord {
  std::size_t iter;
  double objective;
  double w_delta_l1;
};

/// One record per iterate; record 0 describes the start point.
struct IterationTrace {
  std::vector<TraceRecord> records;
  core::WeightVector final_weights;
  Termination reason;

  std::size_t iterations() const { return records.empty() ? 0 : records.back().iter; }
};

/// Columns iter,objective,w_delta_l1.
std::string trace_to_csv(const IterationTrace& trace);

}  // namespace ebprior::estimators
