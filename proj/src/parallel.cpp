#include "cylfbm/parallel.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace cylfbm::parallel {

void for_chunks(std::size_t total,
                const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  if (total == 0) return;
  const std::size_t chunks = std::min(chunk_count, total);
  const std::size_t per = (total + chunks - 1) / chunks;

  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const std::size_t workers = std::min<std::size_t>(hw, chunks);

  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) {
      const std::size_t lo = c * per;
      const std::size_t hi = std::min(total, lo + per);
      if (lo < hi) body(lo, hi, c);
    }
    return;
  }

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t c = w; c < chunks; c += workers) {
        const std::size_t lo = c * per;
        const std::size_t hi = std::min(total, lo + per);
        if (lo < hi) body(lo, hi, c);
      }
    });
  }
  for (auto& t : pool) t.join();
}

} // namespace cylfbm::parallel
