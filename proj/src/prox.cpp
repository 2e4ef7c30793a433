#include "motgv/prox.hpp"

#include <cmath>

namespace motgv {

namespace {

// Golden-section fallback: minimize the 1-D objective on [0, hi].
double prox_golden(const std::function<double(double)>& obj, double hi) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = 0.0, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = obj(x1), f2 = obj(x2);
  for (int it = 0; it < 200 && b - a > 1e-13 * (1.0 + hi); ++it) {
    if (f1 > f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = obj(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = obj(x1);
    }
  }
  double best = 0.5 * (a + b);
  // The endpoints are candidates too (the objective can be flat near 0).
  if (obj(0.0) <= obj(best)) best = 0.0;
  if (obj(hi) < std::min(obj(best), obj(0.0))) best = hi;
  return best;
}

// Solve s + (mu / alpha) * (s / alpha)^(q-1) = z on [0, z] for q > 1.
double power_prox(double q, double z, double mu, double alpha) {
  const double c = mu / alpha;
  auto g = [&](double s) { return s + c * std::pow(s / alpha, q - 1.0) - z; };
  double lo = 0.0, hi = z, s = z;
  for (int it = 0; it < 100; ++it) {
    const double gv = g(s);
    if (std::fabs(gv) <= 1e-12 * (1.0 + z)) return s;
    if (gv > 0.0) hi = s;
    else lo = s;
    const double dg = 1.0 + c * (q - 1.0) * std::pow(s / alpha, q - 2.0) / alpha;
    double next = s - gv / dg;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    s = next;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + z); ++it) {
    s = 0.5 * (lo + hi);
    (g(s) > 0.0 ? hi : lo) = s;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double pointwise_prox_conjugate(const PhiSpec& phi_conj, std::size_t cell, double z, double mu,
                                double alpha) {
  if (!(alpha > 0.0) || mu < 0.0) throw InputError("pointwise_prox_conjugate: bad parameters");
  if (z <= 0.0) return 0.0;
  if (mu == 0.0) {
    // Free minimization of the quadratic inside the effective domain.
    double s = z;
    while (s > 0.0 && std::isinf(phi_conj.eval(cell, s / alpha))) s *= 0.5;
    if (std::isinf(phi_conj.eval(cell, z / alpha))) {
      // Clamp to the domain edge by bisection.
      double lo = s, hi = z;
      for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + z); ++it) {
        const double m = 0.5 * (lo + hi);
        (std::isinf(phi_conj.eval(cell, m / alpha)) ? hi : lo) = m;
      }
      return lo;
    }
    return z;
  }
  if (phi_conj.exponent_based()) {
    const double p = phi_conj.exponent_at(cell);
    if (phi_conj.conjugated()) {
      if (p == 1.0) return std::min(z, alpha);  // indicator of [0, alpha]
      return power_prox(p / (p - 1.0), z, mu, alpha);
    }
    if (p == 1.0) {
      // Linear penalty: soft threshold.
      return std::max(0.0, z - mu / alpha);
    }
    return power_prox(p, z, mu, alpha);
  }
  auto obj = [&](double s) {
    const double ph = phi_conj.eval(cell, s / alpha);
    return std::isinf(ph) ? kInf : 0.5 * (s - z) * (s - z) + mu * ph;
  };
  return prox_golden(obj, z);
}

GridField project_luxemburg_ball(const PhiSpec& phi, const GridField& psi, double alpha) {
  if (!(alpha > 0.0)) throw InputError("project_luxemburg_ball: alpha must be positive");
  const PhiSpec conj = phi.conjugate();
  const std::size_t n = psi.cells();
  const bool spatial = conj.spatial_cells() > 1;
  if (spatial && conj.spatial_cells() != n)
    throw InputError("project_luxemburg_ball: exponent map does not match field");
  const double w = psi.cell_measure();

  std::vector<double> mag(n);
  for (std::size_t c = 0; c < n; ++c) mag[c] = psi.magnitude(c);

  auto feasibility = [&](const std::vector<double>& m) {
    std::vector<double> terms(n);
    for (std::size_t c = 0; c < n; ++c)
      terms[c] = conj.eval(spatial ? c : 0, m[c] / alpha) * w;
    return pairwise_sum(terms);
  };
  if (feasibility(mag) <= 1.0) return psi;

  auto shrink = [&](double mu) {
    std::vector<double> s(n);
    for (std::size_t c = 0; c < n; ++c)
      s[c] = pointwise_prox_conjugate(conj, spatial ? c : 0, mag[c], mu, alpha);
    return s;
  };

  // rho(s(mu)/alpha) decreases in mu; bracket the multiplier, then close in
  // with an Illinois iteration on the feasibility residual.
  double mu_lo = 0.0, f_lo = feasibility(mag) - 1.0;
  double mu_hi = 1.0;
  std::vector<double> s = shrink(mu_hi);
  double f_hi = feasibility(s) - 1.0;
  int guard = 0;
  while (f_hi > 0.0) {
    mu_lo = mu_hi;
    f_lo = f_hi;
    mu_hi *= 16.0;
    s = shrink(mu_hi);
    f_hi = feasibility(s) - 1.0;
    if (++guard > 200) throw NumericError("project_luxemburg_ball: multiplier bracket failed");
  }
  for (int it = 0; it < 100 && mu_hi - mu_lo > 1e-14 * mu_hi; ++it) {
    double mu = mu_hi - f_hi * (mu_hi - mu_lo) / (f_hi - f_lo);
    if (!(mu > mu_lo && mu < mu_hi)) mu = 0.5 * (mu_lo + mu_hi);
    s = shrink(mu);
    const double f = feasibility(s) - 1.0;
    if (f > 0.0) {
      mu_lo = mu;
      f_lo = f;
      f_hi *= 0.5;
    } else {
      mu_hi = mu;
      f_hi = f;
      f_lo *= 0.5;
    }
    if (std::fabs(f) <= 1e-12) break;
  }
  s = shrink(mu_hi);  // feasible side

  GridField out = psi;
  const int ch = psi.channels();
  for (std::size_t c = 0; c < n; ++c) {
    const double scale = mag[c] > 0.0 ? s[c] / mag[c] : 0.0;
    for (int q = 0; q < ch; ++q) out[c * ch + q] *= scale;
  }
  return out;
}

}  // namespace motgv
