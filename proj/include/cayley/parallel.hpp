#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace cayley::parallel {

/// Caps the worker count used by every parallel loop in the library. n <= 0 restores the default.
void set_threads(int n);
int threads();

/// Work is always split into chunks of this many items, independent of the
/// thread count, so chunked reductions give bit-identical results.
inline constexpr std::size_t kChunk = std::size_t{1} << 12;

inline std::size_t num_chunks(std::size_t n, std::size_t chunk = kChunk) {
  return (n + chunk - 1) / chunk;
}

/// Calls body(begin, end) for every fixed-size chunk of [0, n), possibly concurrently.
template <class Body>
void for_chunks(std::size_t n, Body&& body, std::size_t chunk = kChunk) {
  const auto count = static_cast<long long>(num_chunks(n, chunk));
#if defined(_OPENMP)
#pragma omp parallel for schedule(static) num_threads(threads()) if (count > 1)
#endif
  for (long long c = 0; c < count; ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * chunk;
    body(begin, std::min(n, begin + chunk));
  }
}

/// Runs body(i) for i in [0, n) with one item per work unit.
template <class Body>
void for_each_index(std::size_t n, Body&& body) {
  for_chunks(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) body(i);
  }, 1);
}

/// Sum of partial(begin, end) over fixed chunks, combined in chunk order.
template <class T, class Partial>
T sum_chunks(std::size_t n, T zero, Partial&& partial, std::size_t chunk = kChunk) {
  std::vector<T> parts(num_chunks(n, chunk), zero);
  for_chunks(n, [&](std::size_t b, std::size_t e) { parts[b / chunk] = partial(b, e); }, chunk);
  T total = zero;
  for (auto& p : parts) total += p;
  return total;
}

}  // namespace cayley::parallel
