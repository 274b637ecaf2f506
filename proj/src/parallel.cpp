#include "filament/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace filament {

std::size_t worker_count() {
  std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char *env = std::getenv("FILAMENT_LAB_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1)
        return std::min<std::size_t>(hw, static_cast<std::size_t>(cap));
    } catch (...) {
      // malformed value: ignore
    }
  }
  return hw;
}

void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)> &body) {
  const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(n / 64, 1));
  if (workers <= 1) {
    body(0, n);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b = w * chunk;
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e)
      break;
    pool.emplace_back(body, b, e);
  }
  for (auto &t : pool)
    t.join();
}

} // namespace filament
