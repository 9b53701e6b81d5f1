#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sigver {

// Every parallel kernel in this library exists in two forms selected at runtime:
// the serial reference path and the OpenMP path. Both must produce bit-identical
// results; loop bodies write only to their own index slot and all reductions are
// performed serially afterwards.
enum class ExecMode { serial, openmp };

inline int hardware_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Runs fn(i) for i in [0, n). Exceptions thrown by fn are captured per index and
// the lowest-index one is rethrown after the loop, so error behaviour does not
// depend on scheduling.
template <class Fn>
void parallel_for(std::size_t n, ExecMode mode, Fn&& fn) {
    if (n == 0) return;
#ifdef _OPENMP
    if (mode == ExecMode::openmp) {
        std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            try {
                fn(static_cast<std::size_t>(i));
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (errors[i]) std::rethrow_exception(errors[i]);
        }
        return;
    }
#else
    (void)mode;
#endif
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace sigver
