#ifndef SPECSCALES_PARALLEL_HPP
#define SPECSCALES_PARALLEL_HPP

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace specscales {

enum class Exec;  // defined in spectrum.hpp

/// Applies f(i) for i in [0, n).  The parallel path dispatches iterations
/// over OpenMP threads; results must be written to disjoint slots so the
/// output is identical to the serial reference regardless of scheduling.
template <typename F>
void for_each_index(std::size_t n, bool parallel, F&& f) {
#ifdef _OPENMP
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            f(static_cast<std::size_t>(i));
        return;
    }
#else
    (void)parallel;
#endif
    for (std::size_t i = 0; i < n; ++i) f(i);
}

}  // namespace specscales

#endif
