#pragma once

#include <cstddef>
#include <functional>

namespace bundle_lab {

/// Worker count: BUNDLE_LAB_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
unsigned thread_count();

/// Runs body(i) for every i in [0, count). Indices are handed out dynamically;
/// callers write results into index-addressed slots and reduce afterwards in
/// index order, which keeps every result independent of scheduling. The first
/// exception thrown by any body is rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace bundle_lab
