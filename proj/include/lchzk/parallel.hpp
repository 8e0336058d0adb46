#pragma once

#include <cstdint>

#include "lchzk/rng.hpp"

namespace lchzk {

// Monte Carlo driver: sample i always sees Rng(mix_seed(seed, i)), so the
// parallel and serial paths produce identical results and runs are
// reproducible regardless of thread count.  `fn(i, rng)` must only write to
// per-index state.
template <class Fn>
void run_samples(uint64_t count, uint64_t seed, bool parallel, Fn&& fn) {
#if defined(LCHZK_HAVE_OPENMP)
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < static_cast<int64_t>(count); ++i) {
      Rng rng(mix_seed(seed, static_cast<uint64_t>(i)));
      fn(static_cast<uint64_t>(i), rng);
    }
    return;
  }
#else
  (void)parallel;
#endif
  for (uint64_t i = 0; i < count; ++i) {
    Rng rng(mix_seed(seed, i));
    fn(i, rng);
  }
}

}  // namespace lchzk
