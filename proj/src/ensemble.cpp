#include "statewalk/ensemble.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace statewalk {

void run_trials(int n_trials, ExecPolicy policy, const std::function<void(int)>& body) {
    if (policy == ExecPolicy::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n_trials; ++i) body(i);
        return;
#endif
    }
    for (int i = 0; i < n_trials; ++i) body(i);
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace statewalk
