#include "ebprior/estimators/trace.hpp"

#include <fmt/format.h>

#include "ebprior/core/csv.hpp"

namespace ebprior::estimators {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::max_iter: return "max-iter";
    case Termination::tol: return "tol";
    case Termination::error: return "error";
  }
  return "unknown";
}

std::string trace_to_csv(const IterationTrace& trace) {
  std::string out = "iter,objective,w_delta_l1\n";
  for (const auto& r : trace.records) {
    out += fmt::format("{},{},{}\n", r.iter, core::format_real(r.objective), core::format_real(r.w_delta_l1));
  }
  return out;
}

}  // namespace ebprior::estimators
