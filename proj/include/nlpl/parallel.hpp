#pragma once

#include <cstddef>
#include <functional>

namespace nlpl {

// Worker count used by the pair sums; 1 by default. Values < 1 select the
// hardware concurrency.
void set_thread_count(int n);
int thread_count();

// Splits [0, count) into contiguous chunks, one per worker, and runs body on
// each. Callers write per-index results, so the outcome does not depend on
// the number of workers.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace nlpl
