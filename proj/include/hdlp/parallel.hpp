#pragma once

#include <cstddef>
#include <functional>

namespace hdlp {

/// Runs body(i) for i in [0, count) on up to `threads` workers. Work is
/// handed out by an atomic counter, so callers that need deterministic
/// output must write results into slot i and aggregate afterwards.
/// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace hdlp
