// Data-parallel sweep helper: OpenMP-backed with a serial reference path.
// Results are written per-index, so serial and parallel runs are bitwise
// identical; tests and the benchmark target compare the two paths.
#pragma once

#include <cstddef>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ktk {

enum class ExecPolicy { Serial, Parallel };

inline ExecPolicy& default_policy() {
    static ExecPolicy p = ExecPolicy::Parallel;
    return p;
}

template <typename F>
void parallel_for(std::size_t n, F&& body, ExecPolicy pol = default_policy()) {
#ifdef _OPENMP
    if (pol == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < (long long)n; ++i) body(std::size_t(i));
        return;
    }
#else
    (void)pol;
#endif
    for (std::size_t i = 0; i < n; ++i) body(i);
}

inline int hardware_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace ktk
