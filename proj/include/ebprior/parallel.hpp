#pragma once

#include <cstddef>
#include <functional>

namespace ebprior {

/// Worker count used by the row-parallel kernels. 0 means "hardware
/// concurrency". Outputs never depend on this value: every index writes
/// only its own slot.
void set_thread_count(std::size_t threads);
std::size_t thread_count();

/// Runs body(i) for i in [0, n) over contiguous chunks. The first exception
/// thrown by any worker is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ebprior
