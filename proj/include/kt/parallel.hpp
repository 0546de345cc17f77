//==============================================================================
// parallel.hpp
// Elementwise loop splitting across a fixed small thread count. Only used
// for maps where each output element is written exactly once and does not
// depend on the partition, so results are bitwise identical to a serial run.
//==============================================================================
#pragma once

#include <cstddef>
#include <functional>

namespace kt {

int hardwareThreads();

// f(begin, end) over [0, n) split into contiguous ranges
void parallelFor(std::size_t n, const std::function<void(std::size_t, std::size_t)>& f);

} // namespace kt
