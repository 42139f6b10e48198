#include "trustregion/kernels.hpp"

namespace trustregion {

namespace {

// Below this many tableau entries threading costs more than it saves.
constexpr std::size_t kParallelMinEntries = 1 << 15;

inline void scale_pivot_row(double* T, std::size_t cols, std::size_t pr, std::size_t pc) {
    double* row = T + pr * cols;
    const double inv = 1.0 / row[pc];
    for (std::size_t j = 0; j < cols; ++j) {
        row[j] *= inv;
    }
    row[pc] = 1.0;
}

inline void eliminate_row(double* T, std::size_t cols, std::size_t pr, std::size_t pc,
                          std::size_t i) {
    double* row = T + i * cols;
    const double f = row[pc];
    if (f == 0.0) {
        return;
    }
    const double* prow = T + pr * cols;
    for (std::size_t j = 0; j < cols; ++j) {
        row[j] -= f * prow[j];
    }
    row[pc] = 0.0;
}

} // namespace

void pivot_eliminate_serial(double* T, std::size_t rows, std::size_t cols, std::size_t pr,
                            std::size_t pc) {
    scale_pivot_row(T, cols, pr, pc);
    for (std::size_t i = 0; i < rows; ++i) {
        if (i != pr) {
            eliminate_row(T, cols, pr, pc, i);
        }
    }
}

void pivot_eliminate_parallel(double* T, std::size_t rows, std::size_t cols, std::size_t pr,
                              std::size_t pc) {
    scale_pivot_row(T, cols, pr, pc);
    const long long n = static_cast<long long>(rows);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) {
        const auto r = static_cast<std::size_t>(i);
        if (r != pr) {
            eliminate_row(T, cols, pr, pc, r);
        }
    }
}

void pivot_eliminate(double* T, std::size_t rows, std::size_t cols, std::size_t pr,
                     std::size_t pc, Exec exec) {
    if (exec == Exec::parallel && rows * cols >= kParallelMinEntries) {
        pivot_eliminate_parallel(T, rows, cols, pr, pc);
    } else {
        pivot_eliminate_serial(T, rows, cols, pr, pc);
    }
}

} // namespace trustregion
