#include "motgv/orlicz.hpp"

#include <cmath>

#include "motgv/prox.hpp"

namespace motgv {

namespace {

bool check_spatial(const PhiSpec& phi, const GridField& f) {
  const bool spatial = phi.spatial_cells() > 1;
  if (spatial && phi.spatial_cells() != f.cells())
    throw InputError("orlicz: exponent map does not match field");
  return spatial;
}

}  // namespace

double modular(const PhiSpec& phi, const GridField& f) {
  const bool spatial = check_spatial(phi, f);
  const double w = f.cell_measure();
  std::vector<double> terms(f.cells());
  for (std::size_t c = 0; c < f.cells(); ++c) {
    const double v = phi.eval(spatial ? c : 0, f.magnitude(c));
    if (std::isinf(v)) return kInf;
    terms[c] = v * w;
  }
  return pairwise_sum(terms);
}

double luxemburg_norm(const PhiSpec& phi, const GridField& f) {
  check_spatial(phi, f);
  if (f.max_magnitude() == 0.0) return 0.0;
  auto rho = [&](double lambda) {
    GridField g = f;
    g *= 1.0 / lambda;
    return modular(phi, g);
  };
  double hi = 1.0;
  int guard = 0;
  while (rho(hi) > 1.0) {
    hi *= 2.0;
    if (++guard > 200) throw NumericError("luxemburg_norm: no feasible scale");
  }
  double lo = hi;
  guard = 0;
  while (rho(lo * 0.5) <= 1.0) {
    lo *= 0.5;
    if (++guard > 200) return 0.0;  // modular vanishes at every scale
  }
  lo *= 0.5;
  for (int it = 0; it < 200 && hi - lo > 1e-10 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (rho(mid) <= 1.0 ? hi : lo) = mid;
  }
  return hi;
}

VariationResult anisotropic_variation(const PhiSpec& phi, const GridField& f) {
  check_spatial(phi, f);
  const double maxm = f.max_magnitude();
  if (maxm == 0.0) return {0.0, false};
  const double w = f.cell_measure();
  std::vector<double> absmass(f.cells());
  for (std::size_t c = 0; c < f.cells(); ++c) absmass[c] = f.magnitude(c) * w;
  const double l1 = pairwise_sum(absmass);

  auto g = [&](double mu) {
    GridField v = f;
    v *= 1.0 / mu;
    const double r = modular(phi, v);
    return std::isinf(r) ? kInf : mu * (1.0 + r);
  };
  // g is convex in mu, hence unimodal in log mu.
  const double la = std::log(maxm * 1e-13), lb = std::log(l1 * 1e6);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = la, b = lb;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double g1 = g(std::exp(x1)), g2 = g(std::exp(x2));
  for (int it = 0; it < 300 && b - a > 1e-12; ++it) {
    if (g1 > g2) {
      a = x1;
      x1 = x2;
      g1 = g2;
      x2 = a + gr * (b - a);
      g2 = g(std::exp(x2));
    } else {
      b = x2;
      x2 = x1;
      g2 = g1;
      x1 = b - gr * (b - a);
      g1 = g(std::exp(x1));
    }
  }
  const double lmid = 0.5 * (a + b);
  VariationResult out;
  out.value = std::min(g1, g2);
  out.saturated = lmid - la < 0.01 * (lb - la) || lb - lmid < 0.01 * (lb - la);
  // The edges themselves can win when the optimal scale degenerates.
  const double ga = g(std::exp(la)), gb = g(std::exp(lb));
  if (ga < out.value) {
    out.value = ga;
    out.saturated = true;
  }
  if (gb < out.value) {
    out.value = gb;
    out.saturated = true;
  }
  return out;
}

double dual_modular(const PhiSpec& phi, const GridField& f) {
  return modular(phi.conjugate().conjugate(), f);
}

double modular_seminorm(const PhiSpec& phi, const GridField& f) {
  return luxemburg_norm(phi.conjugate().conjugate(), f);
}

double oracle_variation(const PhiSpec& phi, const GridField& f, int iters) {
  check_spatial(phi, f);
  if (f.width() > 16 || f.height() > 16)
    throw InputError("oracle_variation: oracle limited to 16x16 grids");
  if (f.max_magnitude() == 0.0) return 0.0;
  GridField psi(f.width(), f.height(), f.channels(), f.h());
  const double s0 = 1.0 / f.max_magnitude();
  double best = 0.0;
  for (int k = 0; k < iters; ++k) {
    psi.axpy(s0 / std::sqrt(static_cast<double>(k + 1)), f);
    psi = project_luxemburg_ball(phi, psi, 1.0);
    best = std::max(best, inner(psi, f));
  }
  return best;
}

}  // namespace motgv
