#pragma once

#include <cstddef>
#include <functional>

namespace ultranet {

/// Number of worker threads; honors the ULTRANET_THREADS environment variable
/// (values < 1 are clamped to 1).
int worker_threads();

/// Deterministic parallel map over [0, count): body(i) must only write state
/// owned by index i. Falls back to a serial loop for small counts.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace ultranet
