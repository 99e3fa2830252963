#pragma once

#include <cstddef>
#include <functional>

namespace mbo {

// Worker count for internal loops. Defaults to MBO_THREADS or the hardware count.
int thread_count();
void set_thread_count(int n);

// Calls fn(i) for i in [0, count) over contiguous static chunks. Results must
// only depend on i, so output is identical for any thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace mbo
