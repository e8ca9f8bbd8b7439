#include "lapnet/threads.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace lapnet {

int configure_threads() {
  if (const char* env = std::getenv("LAPNET_THREADS")) {
    try {
      int n = std::stoi(env);
      if (n > 0) omp_set_num_threads(n);
    } catch (const std::exception&) {
      // ignored: not a number
    }
  }
  return omp_get_max_threads();
}

}  // namespace lapnet
