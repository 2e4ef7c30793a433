#include "motgv/tgv.hpp"

#include <cmath>
#include <sstream>

#include "motgv/prox.hpp"

namespace motgv {

namespace {

// Smoothed support value of the alpha-scaled dual ball:
//   max_{psi in B(alpha)} <psi, v> - (gamma/2) ||psi||^2.
// Returns the maximizer (the gradient in v) and the value.
struct Smoothed {
  GridField grad;
  double value;
};

Smoothed smoothed_support(const PhiSpec& phi, const GridField& v, double alpha, double gamma) {
  GridField scaled = v;
  scaled *= 1.0 / gamma;
  GridField p = project_luxemburg_ball(phi, scaled, alpha);
  const double val = inner(p, v) - 0.5 * gamma * inner(p, p);
  return {std::move(p), val};
}

double lux_conjugate(const PhiSpec& phi, const GridField& f) {
  return luxemburg_norm(phi.conjugate(), f);
}

// Certified dual objective: scale psi into both constraint balls, then pair
// with the second deformation of u.
double certified_bound(const PhiSpec& phi, const GridField& G, const GridField& psi,
                       TgvWeights alpha) {
  const double n1 = lux_conjugate(phi, psi);
  if (n1 == 0.0) return 0.0;
  const double n2 = lux_conjugate(phi, div_tensor(psi));
  double c = std::min(1.0, alpha.alpha1 / n1);
  if (n2 > 0.0) c = std::min(c, alpha.alpha2 / n2);
  return std::max(0.0, c * inner(G, psi));
}

}  // namespace

TgvResult tgv2_primal(const PhiSpec& phi, TgvWeights alpha, const GridField& u, TgvOptions opts) {
  if (u.channels() != 1) throw InputError("tgv2_primal: expects a scalar field");
  if (!(alpha.alpha1 > 0.0 && alpha.alpha2 > 0.0)) throw InputError("tgv2_primal: weights must be positive");
  const GridField Du = grad_r(u);
  const GridField G = sym_grad(Du);

  const double normE = operator_norm([](const GridField& w) { return sym_grad(w); },
                                     [](const GridField& xi) {
                                       GridField d = div_tensor(xi);
                                       d *= -1.0;
                                       return d;
                                     },
                                     {u.width(), u.height(), 2, u.h()});
  const double lip_base = 1.0 + normE * normE;

  GridField w = Du;  // exact minimizer when u is affine
  int used = 0;
  int stages = 1;
  for (double g = opts.gamma_init; g > opts.gamma_min; g *= opts.gamma_factor) ++stages;
  const int per_stage = std::max(50, opts.max_iters / stages);

  double gamma = opts.gamma_init;
  for (int stage = 0; stage < stages; ++stage) {
    const double step = gamma / lip_base;
    GridField y = w;
    double t = 1.0;
    for (int it = 0; it < per_stage; ++it) {
      Smoothed s1 = smoothed_support(phi, Du - y, alpha.alpha2, gamma);
      Smoothed s2 = smoothed_support(phi, sym_grad(y), alpha.alpha1, gamma);
      GridField gradF = div_tensor(s2.grad);
      gradF.axpy(1.0, s1.grad);
      gradF *= -1.0;  // d/dw of the smoothed objective
      ++used;

      GridField w_next = y;
      w_next.axpy(-step, gradF);
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      GridField diff = w_next - w;
      y = w_next;
      y.axpy((t - 1.0) / t_next, diff);
      const double move = norm2(diff);
      w = std::move(w_next);
      t = t_next;
      if (move <= 1e-15 * (1.0 + norm2(w))) break;
    }
    gamma = std::max(opts.gamma_min, gamma * opts.gamma_factor);
  }

  TgvResult res;
  res.w_opt = w;
  res.iters_used = used;
  res.value = alpha.alpha2 * anisotropic_variation(phi, Du - w).value +
              alpha.alpha1 * anisotropic_variation(phi, sym_grad(w)).value;
  Smoothed s2 = smoothed_support(phi, sym_grad(w), alpha.alpha1, opts.gamma_min);
  // The smoothed maximizer is dual-feasible after rescaling.
  double dual = certified_bound(phi, G, s2.grad, alpha);
  res.dual_certificate = std::move(s2.grad);
  res.gap = res.value - dual;
  res.converged = res.gap <= opts.tol * (1.0 + res.value);
  return res;
}

double tgv2_dual(const PhiSpec& phi, TgvWeights alpha, const GridField& u, int max_iters) {
  if (u.channels() != 1) throw InputError("tgv2_dual: expects a scalar field");
  if (u.width() > 32 || u.height() > 32) throw InputError("tgv2_dual: grids limited to 32x32");
  const GridField G = sym_grad(grad_r(u));
  const double normA = operator_norm([](const GridField& xi) { return div_tensor(xi); },
                                     [](const GridField& w) {
                                       GridField e = sym_grad(w);
                                       e *= -1.0;
                                       return e;
                                     },
                                     {u.width(), u.height(), 3, u.h()});
  const double sigma = 0.95 / std::max(normA, 1e-12);
  const double tau = sigma;

  GridField psi(u.width(), u.height(), 3, u.h());
  GridField psi_bar = psi;
  GridField y(u.width(), u.height(), 2, u.h());
  double best = 0.0;
  int since_improved = 0;
  for (int it = 0; it < max_iters; ++it) {
    GridField v = y;
    v.axpy(sigma, div_tensor(psi_bar));
    GridField vs = v;
    vs *= 1.0 / sigma;
    GridField proj = project_luxemburg_ball(phi, vs, alpha.alpha2);
    proj *= sigma;
    y = v - proj;

    GridField step = sym_grad(y);  // -A^T y
    step.axpy(1.0, G);
    GridField cand = psi;
    cand.axpy(tau, step);
    GridField psi_next = project_luxemburg_ball(phi, cand, alpha.alpha1);
    psi_bar = psi_next;
    psi_bar *= 2.0;
    psi_bar.axpy(-1.0, psi);
    psi = std::move(psi_next);

    if (it % 25 == 24 || it + 1 == max_iters) {
      const double b = certified_bound(phi, G, psi, alpha);
      if (b > best * (1.0 + 1e-10)) {
        best = b;
        since_improved = 0;
      } else if (++since_improved > 40) {
        break;
      }
    }
  }
  return best;
}

double tgv1(const PhiSpec& phi, double alpha, const GridField& u) {
  if (!(alpha > 0.0)) throw InputError("tgv1: weight must be positive");
  return alpha * anisotropic_variation(phi, grad_r(u)).value;
}

GridField rotate90(const GridField& u) {
  if (u.channels() != 1) throw InputError("rotate90: expects a scalar field");
  if (u.width() != u.height()) throw InputError("rotate90: expects a square grid");
  const int n = u.width();
  GridField out(n, n, 1, u.h());
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) out.at(i, j) = u.at(j, n - 1 - i);
  return out;
}

RotationReport tgv_rotation_check(const PhiSpec& phi, TgvWeights alpha, const GridField& u,
                                  double rel_tol, TgvOptions opts) {
  if (phi.spatial_cells() > 1) throw InputError("tgv_rotation_check: phi must be x-independent");
  RotationReport rep;
  rep.base = tgv2_primal(phi, alpha, u, opts).value;
  GridField v = u;
  for (int k = 0; k < 3; ++k) {
    v = rotate90(v);
    rep.rotated[k] = tgv2_primal(phi, alpha, v, opts).value;
    const double denom = std::max({std::fabs(rep.base), std::fabs(rep.rotated[k]), 1e-30});
    rep.max_rel_err = std::max(rep.max_rel_err, std::fabs(rep.rotated[k] - rep.base) / denom);
  }
  rep.pass = rep.max_rel_err <= rel_tol;
  return rep;
}

GridField block_replicate(const GridField& u, int r) {
  if (u.channels() != 1) throw InputError("block_replicate: expects a scalar field");
  if (r < 1) throw InputError("block_replicate: zoom must be >= 1");
  GridField out(u.width() * r, u.height() * r, 1, u.h() / (r * r));
  for (int j = 0; j < out.height(); ++j)
    for (int i = 0; i < out.width(); ++i) out.at(i, j) = u.at(i / r, j / r);
  return out;
}

ScalingReport tgv_scaling_check(const PhiSpec& phi, TgvWeights alpha, const GridField& u, int r,
                                TgvOptions opts) {
  if (phi.spatial_cells() > 1) throw InputError("tgv_scaling_check: phi must be x-independent");
  ScalingReport rep;
  rep.lhs = tgv2_primal(phi, alpha, block_replicate(u, r), opts).value;
  const TgvWeights scaled{alpha.alpha1 * r * r, alpha.alpha2 * r};
  rep.rhs = tgv2_primal(phi, scaled, u, opts).value / (r * r);
  rep.ratio = rep.rhs != 0.0 ? rep.lhs / rep.rhs : (rep.lhs == 0.0 ? 1.0 : kInf);
  return rep;
}

ExponentMap make_strip_map(int n, double p_outside) {
  ExponentMap m(n, n, p_outside);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double x = (i + 0.5) / n;
      if (std::fabs(x - 0.5) <= 0.125) m.set(i, j, 1.0);
    }
  return m;
}

std::string DecompositionReport::table() const {
  std::ostringstream os;
  os << "level  grid   total        smooth       singular     ratio\n";
  for (std::size_t k = 0; k < level.size(); ++k) {
    char line[160];
    std::snprintf(line, sizeof line, "%-6d %-6d %-12.6g %-12.6g %-12.6g %-12.6g\n", level[k],
                  1 << level[k], total[k], smooth_part[k], singular_estimate[k], ratio[k]);
    os << line;
  }
  if (divergent) os << "divergent: jump line has p > 1, total grows without bound\n";
  return os.str();
}

std::string DecompositionReport::csv() const {
  std::ostringstream os;
  os << "level,grid,total,smooth,singular,ratio,divergent\n";
  os.precision(12);
  for (std::size_t k = 0; k < level.size(); ++k)
    os << level[k] << ',' << (1 << level[k]) << ',' << total[k] << ',' << smooth_part[k] << ','
       << singular_estimate[k] << ',' << ratio[k] << ',' << (divergent ? 1 : 0) << '\n';
  return os.str();
}

DecompositionReport decomposition_experiment(const PhiSpec& phi, double jump_height, int levels) {
  if (levels < 3) throw InputError("decomposition_experiment: need at least 3 levels");
  if (levels > 8) throw InputError("decomposition_experiment: levels > 8 exceeds the resource bound");
  if (!phi.exponent_based())
    throw UnsupportedFamilyError("decomposition_experiment: needs an exponent family");
  const ExponentMap* proto = phi.exponent_map();

  DecompositionReport rep;
  for (int k = 3; k <= levels; ++k) {
    const int n = 1 << k;
    const double h = 1.0 / n;
    PhiSpec level_phi = phi;
    if (proto) {
      // Nearest-neighbor resample of the exponent layout to this level.
      ExponentMap m(n, n, 2.0, proto->p_max());
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          const int si = std::min(proto->width() - 1, (2 * i + 1) * proto->width() / (2 * n));
          const int sj = std::min(proto->height() - 1, (2 * j + 1) * proto->height() / (2 * n));
          m.set(i, j, proto->p(si, sj));
        }
      level_phi = PhiSpec::variable_exponent(std::move(m));
    }

    auto smooth = [](double x, double y) {
      return 0.2 * std::sin(2.0 * 3.14159265358979323846 * x) *
             std::sin(2.0 * 3.14159265358979323846 * y);
    };
    GridField us(n, n, 1, h), uj(n, n, 1, h);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const double x = (i + 0.5) * h, y = (j + 0.5) * h;
        us.at(i, j) = smooth(x, y);
        uj.at(i, j) = us.at(i, j) + (x > 0.5 ? jump_height : 0.0);
      }

    auto deformation = [](const GridField& s) {
      GridField v(s.width(), s.height(), 2, s.h());
      for (int j = 0; j < s.height(); ++j)
        for (int i = 0; i < s.width(); ++i) v.at(i, j, 0) = s.at(i, j);
      return sym_grad(v);
    };
    const double total = dual_modular(level_phi, deformation(uj));
    const double smooth_val = dual_modular(level_phi, deformation(us));
    rep.level.push_back(k);
    rep.total.push_back(total);
    rep.smooth_part.push_back(smooth_val);
    rep.singular_estimate.push_back(total - smooth_val);
    rep.ratio.push_back(rep.total.size() > 1 ? total / rep.total[rep.total.size() - 2] : 1.0);

    if (k == 3) {
      // Divergence iff the jump column sits where p > 1.
      const std::size_t cell = static_cast<std::size_t>(n / 2) * n + (n / 2 - 1);
      rep.divergent = level_phi.exponent_at(level_phi.spatial_cells() > 1 ? cell : 0) > 1.0;
    }
  }
  return rep;
}

}  // namespace motgv
