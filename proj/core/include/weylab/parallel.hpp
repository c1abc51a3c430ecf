#pragma once

#include <cstddef>
#include <functional>

namespace weylab {

/// Worker count used by parallel maps. Defaults to 1; the runner sets it from
/// config or the WEYLAB_WORKERS environment variable.
int workers();
void set_workers(int n);

/// Calls body(i) for i in [0, count). Work is split into contiguous chunks; the
/// caller is responsible for writing results into per-index slots so that any
/// later reduction runs in a fixed order.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace weylab
