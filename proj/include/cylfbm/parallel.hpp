#pragma once

#include <cstddef>
#include <functional>

namespace cylfbm::parallel {

// Splits [0,total) into a fixed number of chunks and runs `body(lo,hi,chunk)`
// on a small thread pool. The chunk decomposition does not depend on the
// machine, so reductions that combine per-chunk results in chunk order are
// bitwise deterministic.
inline constexpr std::size_t chunk_count = 16;

void for_chunks(std::size_t total,
                const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

} // namespace cylfbm::parallel
