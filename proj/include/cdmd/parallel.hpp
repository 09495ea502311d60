#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

// Parallel loop layer. Every parallel kernel in the library writes through
// disjoint slots indexed by the loop variable, so the OpenMP path is
// bit-identical to the serial reference for any thread count. Tests compare
// the two paths; bench_kernels times them.

namespace cdmd::par {

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

/// Serial reference loop.
template <class F>
void serial_for(std::ptrdiff_t n, F&& body) {
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
}

/// OpenMP loop; body(i) must touch only state owned by index i.
template <class F>
void parallel_for(std::ptrdiff_t n, F&& body) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
#else
    serial_for(n, body);
#endif
}

}  // namespace cdmd::par
