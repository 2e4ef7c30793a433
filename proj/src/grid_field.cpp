#include "motgv/grid_field.hpp"

namespace motgv {

double inner(const GridField& a, const GridField& b) {
  if (!a.same_grid(b)) throw InputError("inner: grid mismatch");
  std::vector<double> terms(a.cells());
  const int ch = a.channels();
  for (std::size_t c = 0; c < a.cells(); ++c) {
    const std::size_t k = c * ch;
    double t = 0.0;
    for (int q = 0; q < ch; ++q) t += a[k + q] * b[k + q];
    if (ch == 3) t += a[k + 2] * b[k + 2];  // off-diagonal counted twice
    terms[c] = t;
  }
  return pairwise_sum(terms) * a.cell_measure();
}

}  // namespace motgv
