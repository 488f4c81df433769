#include "gridsched/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace gridsched {

int configured_threads() {
    if (const char* env = std::getenv("GRIDSCHED_THREADS")) {
        try {
            int n = std::stoi(env);
            if (n > 0) {
                return n;
            }
        } catch (const std::exception&) {
        }
    }
    return omp_get_num_procs();
}

void apply_thread_limit() {
    omp_set_num_threads(configured_threads());
}

}  // namespace gridsched
