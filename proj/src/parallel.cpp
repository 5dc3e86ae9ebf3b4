#include "qap/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace qap {

namespace {
std::atomic<unsigned> g_jobs{0};
}

unsigned default_jobs() {
  unsigned j = g_jobs.load();
  if (j == 0) {
    j = std::thread::hardware_concurrency();
    if (j == 0) j = 1;
  }
  return j;
}

void set_default_jobs(unsigned jobs) { g_jobs.store(jobs); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  unsigned jobs) {
  if (jobs == 0) jobs = default_jobs();
  if (jobs <= 1 || count < 2 * jobs) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  std::size_t chunk = (count + jobs - 1) / jobs;
  for (unsigned w = 0; w < jobs; ++w) {
    std::size_t begin = w * chunk;
    std::size_t end = begin + chunk < count ? begin + chunk : count;
    if (begin >= end) break;
    workers.emplace_back([begin, end, &body] {
      for (std::size_t i = begin; i < end; ++i) body(i);
    });
  }
  for (auto& t : workers) t.join();
}

}  // namespace qap
