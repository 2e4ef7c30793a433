#pragma once

#include <cstdlib>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace motgv {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad arguments or malformed inputs (CLI exit code 2 when data-related).
struct InputError : Error {
  using Error::Error;
};

// Iterative kernel failed to converge or produced non-finite values.
struct NumericError : Error {
  using Error::Error;
};

// Operation not defined for the given Phi family.
struct UnsupportedFamilyError : Error {
  using Error::Error;
};

// Extended-value product with the convention inf * 0 = 0.
inline double ext_mul(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

// Deterministic pairwise reduction, row-major order.  Gives the same result
// regardless of how callers chunk their work.
inline double pairwise_sum(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

// Worker-count cap from MOTGV_THREADS (default 1; kernels are cheap enough
// that serial execution is the baseline).
inline int max_threads() {
  static const int cached = [] {
    const char* env = std::getenv("MOTGV_THREADS");
    if (!env) return 1;
    int v = std::atoi(env);
    return v < 1 ? 1 : v;
  }();
  return cached;
}

}  // namespace motgv
