#pragma once

#include "trustregion/parallel.hpp"

#include <cstddef>
#include <vector>

namespace trustregion {

/// Gauss-Jordan pivot on a dense row-major tableau: scales row `pr` so that
/// T[pr][pc] = 1 and eliminates column `pc` from every other row.
void pivot_eliminate_serial(double* T, std::size_t rows, std::size_t cols, std::size_t pr,
                            std::size_t pc);
void pivot_eliminate_parallel(double* T, std::size_t rows, std::size_t cols, std::size_t pr,
                              std::size_t pc);
void pivot_eliminate(double* T, std::size_t rows, std::size_t cols, std::size_t pr,
                     std::size_t pc, Exec exec);

/// Evaluates f(i) for i in [0, n) into out[i]; the parallel path uses OpenMP.
template <class F, class T>
void parallel_map(std::size_t n, std::vector<T>& out, const F& f, Exec exec) {
    out.resize(n);
    const long long nn = static_cast<long long>(n);
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (long long i = 0; i < nn; ++i) {
            out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
        }
    } else {
        for (long long i = 0; i < nn; ++i) {
            out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
        }
    }
}

} // namespace trustregion
