#include "cayley/parallel.hpp"

#include <atomic>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace cayley::parallel {

namespace {
std::atomic<int> g_threads{0};
}

void set_threads(int n) { g_threads.store(n > 0 ? n : 0); }

int threads() {
  const int n = g_threads.load();
  if (n > 0) return n;
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace cayley::parallel
