#pragma once

#include <cstddef>
#include <functional>

namespace qap {

// Worker fan-out for embarrassingly parallel sweeps (vertex evaluations,
// verification points).  Work is split into contiguous chunks so results
// written to preallocated slots stay deterministic.
unsigned default_jobs();
void set_default_jobs(unsigned jobs);

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  unsigned jobs = 0);

}  // namespace qap
