#include "homwalk/parallel.hpp"

#include <cmath>

namespace homwalk {

int resolve_workers(int requested) {
  if (requested > 0) return requested;
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

double compensated_sum(const std::vector<double>& xs) {
  double sum = 0.0, compensation = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      compensation += (sum - t) + x;
    else
      compensation += (x - t) + sum;
    sum = t;
  }
  return sum + compensation;
}

}  // namespace homwalk
