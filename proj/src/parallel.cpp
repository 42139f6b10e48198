#include "trustregion/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace trustregion {

void set_parallel_jobs(int jobs) {
#ifdef _OPENMP
    if (jobs > 0) {
        omp_set_num_threads(jobs);
    }
#else
    (void)jobs;
#endif
}

int parallel_jobs() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace trustregion
