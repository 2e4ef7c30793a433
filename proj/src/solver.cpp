#include "motgv/solver.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "motgv/prox.hpp"

namespace motgv {

namespace {

GridField conv3_binomial(const GridField& u) {
  static const double k[3][3] = {{1, 2, 1}, {2, 4, 2}, {1, 2, 1}};
  GridField out(u.width(), u.height(), 1, u.h());
  for (int j = 0; j < u.height(); ++j)
    for (int i = 0; i < u.width(); ++i) {
      double s = 0.0;
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
          const int ii = i + di, jj = j + dj;
          if (ii >= 0 && ii < u.width() && jj >= 0 && jj < u.height())
            s += k[dj + 1][di + 1] * u.at(ii, jj);
        }
      out.at(i, j) = s / 16.0;
    }
  return out;
}

// Norm of the stacked operator (u, w) -> (Du - w, Ew) by power iteration.
double stacked_norm(int width, int height, double h, int iters) {
  GridField u(width, height, 1, h), w(width, height, 2, h);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (std::size_t k = 0; k < u.size(); ++k) u[k] = unif(rng);
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = unif(rng);
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    const double nrm = std::sqrt(inner(u, u) + inner(w, w));
    if (nrm == 0.0) return 0.0;
    u *= 1.0 / nrm;
    w *= 1.0 / nrm;
    GridField y1 = grad_r(u) - w;
    GridField y2 = sym_grad(w);
    GridField gu = div_vector_r(y1);
    gu *= -1.0;
    GridField gw = div_tensor(y2);
    gw *= -1.0;
    gw.axpy(-1.0, y1);
    lambda = inner(u, gu) + inner(w, gw);
    u = std::move(gu);
    w = std::move(gw);
  }
  return std::sqrt(std::max(lambda, 0.0));
}

bool is_identity(const OperatorPair& K, int width, int height, double h) {
  GridField probe(width, height, 1, h);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (std::size_t k = 0; k < probe.size(); ++k) probe[k] = unif(rng);
  GridField out = K.forward(probe);
  for (std::size_t k = 0; k < probe.size(); ++k)
    if (std::fabs(out[k] - probe[k]) > 1e-14) return false;
  return true;
}

// Conjugate gradients for (I/tau + K^T K) u = b.
GridField solve_quadratic_prox(const OperatorPair& K, const GridField& b, double tau,
                               const GridField& init) {
  auto apply = [&](const GridField& u) {
    GridField out = K.adjoint(K.forward(u));
    out.axpy(1.0 / tau, u);
    return out;
  };
  GridField u = init;
  GridField r = b - apply(u);
  GridField p = r;
  double rr = inner(r, r);
  const double b2 = std::max(inner(b, b), 1e-300);
  for (int it = 0; it < 300 && rr > 1e-26 * b2; ++it) {
    GridField ap = apply(p);
    const double alpha = rr / inner(p, ap);
    u.axpy(alpha, p);
    r.axpy(-alpha, ap);
    const double rr_new = inner(r, r);
    p *= rr_new / rr;
    p += r;
    rr = rr_new;
  }
  return u;
}

// Certified dual value for the identity-K problem, built from a feasible
// second-order field: psi1 = -div(c psi2) scaled into its ball.
double dual_value_identity(const GridField& f, const PhiSpec& phi, TgvWeights alpha,
                           const GridField& psi2) {
  GridField psi1 = div_tensor(psi2);
  psi1 *= -1.0;
  const double n2 = luxemburg_norm(phi.conjugate(), psi1);
  const double c = n2 > 0.0 ? std::min(1.0, alpha.alpha2 / n2) : 1.0;
  psi1 *= c;
  GridField d = div_vector_r(psi1);
  return -0.5 * inner(d, d) - inner(f, d);
}

// Moreau-smoothed denoising objective and its gradient.
struct SmoothEval {
  double value;
  GridField grad_u;
  GridField grad_w;
};

SmoothEval smoothed_objective(const GridField& f, const PhiSpec& phi, TgvWeights alpha,
                              double gamma, const GridField& u, const GridField& w,
                              bool want_grad) {
  auto support = [&](const GridField& v, double a) {
    GridField scaled = v;
    scaled *= 1.0 / gamma;
    GridField p = project_luxemburg_ball(phi, scaled, a);
    const double val = inner(p, v) - 0.5 * gamma * inner(p, p);
    return std::make_pair(std::move(p), val);
  };
  GridField r = u - f;
  auto [p1, v1] = support(grad_r(u) - w, alpha.alpha2);
  auto [p2, v2] = support(sym_grad(w), alpha.alpha1);
  SmoothEval out;
  out.value = 0.5 * inner(r, r) + v1 + v2;
  if (want_grad) {
    out.grad_u = div_vector_r(p1);
    out.grad_u *= -1.0;
    out.grad_u += r;
    out.grad_w = div_tensor(p2);
    out.grad_w.axpy(1.0, p1);
    out.grad_w *= -1.0;
  }
  return out;
}

}  // namespace

OperatorPair identity_op(int, int, double) {
  OperatorPair op;
  op.forward = [](const GridField& u) { return u; };
  op.adjoint = [](const GridField& u) { return u; };
  op.norm_estimate = 1.0;
  return op;
}

OperatorPair blur_op(int width, int height, double h) {
  OperatorPair op;
  op.forward = [](const GridField& u) { return conv3_binomial(u); };
  op.adjoint = op.forward;  // symmetric kernel, zero padding
  op.norm_estimate = operator_norm(op.forward, op.adjoint, {width, height, 1, h});
  return op;
}

double denoise_objective(const GridField& f, const OperatorPair& K, const PhiSpec& phi,
                         TgvWeights alpha, const GridField& u, const GridField& w) {
  GridField r = K.forward(u) - f;
  return 0.5 * inner(r, r) + alpha.alpha2 * anisotropic_variation(phi, grad_r(u) - w).value +
         alpha.alpha1 * anisotropic_variation(phi, sym_grad(w)).value;
}

DenoiseResult denoise_tgv(const GridField& f, const OperatorPair& K, const PhiSpec& phi,
                          TgvWeights alpha, SolverConfig cfg, const GridField* u0,
                          const GridField* w0) {
  if (f.channels() != 1) throw InputError("denoise_tgv: expects a scalar datum");
  if (!(alpha.alpha1 > 0.0 && alpha.alpha2 > 0.0))
    throw InputError("denoise_tgv: weights must be positive");
  const double L = stacked_norm(f.width(), f.height(), f.h(), cfg.power_iters);
  double tau = cfg.tau, sigma = cfg.sigma;
  if (tau <= 0.0 || sigma <= 0.0) {
    tau = sigma = 0.99 / std::max(L, 1e-12);
  } else if (tau * sigma * L * L > 1.0 + 1e-12) {
    throw InputError("denoise_tgv: tau sigma L^2 > 1");
  }
  const bool ident = is_identity(K, f.width(), f.height(), f.h());

  GridField u = u0 ? *u0 : f;
  GridField w = w0 ? *w0 : grad_r(u);
  GridField ub = u, wb = w;
  GridField psi1(f.width(), f.height(), 2, f.h());
  GridField psi2(f.width(), f.height(), 3, f.h());

  DenoiseResult res;
  res.u_star = u;
  res.w_star = w;
  double best = denoise_objective(f, K, phi, alpha, u, w);

  for (int it = 0; it < cfg.max_iters; ++it) {
    psi1.axpy(sigma, grad_r(ub) - wb);
    psi1 = project_luxemburg_ball(phi, psi1, alpha.alpha2);
    psi2.axpy(sigma, sym_grad(wb));
    psi2 = project_luxemburg_ball(phi, psi2, alpha.alpha1);

    GridField u_new = u;
    u_new.axpy(tau, div_vector_r(psi1));  // u - tau D^T psi1
    if (ident) {
      u_new.axpy(tau, f);
      u_new *= 1.0 / (1.0 + tau);
    } else {
      GridField b = K.adjoint(f);
      b.axpy(1.0 / tau, u_new);
      u_new = solve_quadratic_prox(K, b, tau, u);
    }
    GridField w_new = w;
    w_new.axpy(tau, psi1);
    w_new.axpy(tau, div_tensor(psi2));

    ub = u_new;  // extrapolation, theta = 1
    ub *= 2.0;
    ub.axpy(-1.0, u);
    wb = w_new;
    wb *= 2.0;
    wb.axpy(-1.0, w);
    u = std::move(u_new);
    w = std::move(w_new);
    res.iters_used = it + 1;

    const double energy = denoise_objective(f, K, phi, alpha, u, w);
    if (!std::isfinite(energy))
      throw NumericError("denoise_tgv: non-finite energy at iteration " + std::to_string(it));
    if (energy < best) {
      best = energy;
      res.u_star = u;
      res.w_star = w;
    }
    res.energy_trace.push_back(best);
    if (ident) {
      const double dual = dual_value_identity(f, phi, alpha, psi2);
      const double gap = (best - dual) / std::max(1.0, std::fabs(best));
      res.gap_trace.push_back(gap);
      if (gap < cfg.tol_gap) break;
    } else {
      res.gap_trace.push_back(std::numeric_limits<double>::quiet_NaN());
      if (it > 20) {
        const double drop = res.energy_trace[it - 20] - best;
        if (drop >= 0.0 && drop < cfg.tol_gap * std::max(1.0, best)) break;
      }
    }
  }
  return res;
}

DenoiseResult oracle_denoise(const GridField& f, const PhiSpec& phi, TgvWeights alpha, int sweeps) {
  if (f.width() > 8 || f.height() > 8) throw InputError("oracle_denoise: grids limited to 8x8");
  GridField u = f;
  GridField w = grad_r(u);

  const double normL = stacked_norm(f.width(), f.height(), f.h(), 50);
  // Smoothing ladder: a factor sqrt(10) per stage keeps the warm starts close
  // enough that the accelerated stage solves stay in their fast regime.
  for (double gamma = 1e-2; gamma > 0.5e-7; gamma *= 0.31622776601683794) {
    auto obj = [&](const GridField& uu, const GridField& ww) {
      return smoothed_objective(f, phi, alpha, gamma, uu, ww, false).value;
    };
    // Cyclic coordinate descent with golden-section line searches; only on the
    // coarse stages, where a sweep is cheap and kinks are still smoothed out.
    const int cd_sweeps = gamma >= 0.9e-4 ? std::max(1, sweeps / 400) : 0;
    for (int sweep = 0; sweep < cd_sweeps; ++sweep) {
      auto line_search = [&](double* slot) {
        const double x0 = *slot;
        double delta = 0.25 * (1.0 + std::fabs(x0));
        auto val = [&](double x) {
          *slot = x;
          const double v = obj(u, w);
          return v;
        };
        double a = x0 - delta, b = x0 + delta;
        double fa = val(a), fm = val(x0), fb = val(b);
        int guard = 0;
        while ((fa < fm || fb < fm) && guard++ < 60) {
          delta *= 2.0;
          a = x0 - delta;
          b = x0 + delta;
          fa = val(a);
          fb = val(b);
        }
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = val(x1), f2 = val(x2);
        while (b - a > 1e-11 * (1.0 + std::fabs(x0))) {
          if (f1 > f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = val(x2);
          } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = val(x1);
          }
        }
        const double cand = 0.5 * (a + b);
        const double fcand = val(cand);
        if (val(x0) > fcand) *slot = cand;  // never accept a worse point
      };
      for (std::size_t k = 0; k < u.size(); ++k) line_search(&u[k]);
      for (std::size_t k = 0; k < w.size(); ++k) line_search(&w[k]);
    }
    // Accelerated gradient polish at this smoothing level.
    const double lip = (std::max(1.0, normL * normL)) / gamma + 1.0;
    GridField yu = u, yw = w, pu = u, pw = w;
    double t = 1.0;
    for (int it = 0; it < 15 * sweeps; ++it) {
      SmoothEval ev = smoothed_objective(f, phi, alpha, gamma, yu, yw, true);
      GridField nu = yu, nw = yw;
      nu.axpy(-1.0 / lip, ev.grad_u);
      nw.axpy(-1.0 / lip, ev.grad_w);
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      yu = nu;
      yw = nw;
      GridField du = nu - pu, dw = nw - pw;
      yu.axpy((t - 1.0) / t_next, du);
      yw.axpy((t - 1.0) / t_next, dw);
      const double move = std::sqrt(inner(du, du) + inner(dw, dw));
      pu = std::move(nu);
      pw = std::move(nw);
      t = t_next;
      if (move < 1e-16) break;
    }
    if (obj(pu, pw) < obj(u, w)) {
      u = pu;
      w = pw;
    }
  }

  DenoiseResult res;
  res.u_star = u;
  res.w_star = w;
  res.iters_used = sweeps;
  OperatorPair K = identity_op(f.width(), f.height(), f.h());
  res.energy_trace.push_back(denoise_objective(f, K, phi, alpha, u, w));
  return res;
}

std::pair<GridField, GridField> affine_projection(const GridField& u) {
  if (u.channels() != 1) throw InputError("affine_projection: expects a scalar field");
  if (u.width() < 2 || u.height() < 2)
    throw InputError("affine_projection: degenerate grid, affine basis is rank-deficient");
  const int W = u.width(), H = u.height();
  const double h = u.h();
  auto basis = [&](int k, int i, int j) {
    if (k == 0) return 1.0;
    if (k == 1) return (i + 0.5) * h;
    return (j + 0.5) * h;
  };
  double A[3][3] = {};
  double b[3] = {};
  for (int j = 0; j < H; ++j)
    for (int i = 0; i < W; ++i)
      for (int r = 0; r < 3; ++r) {
        b[r] += basis(r, i, j) * u.at(i, j);
        for (int c = 0; c < 3; ++c) A[r][c] += basis(r, i, j) * basis(c, i, j);
      }
  // Gaussian elimination with partial pivoting on the 3x3 normal system.
  int perm[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::fabs(A[perm[r]][col]) > std::fabs(A[perm[piv]][col])) piv = r;
    std::swap(perm[col], perm[piv]);
    if (std::fabs(A[perm[col]][col]) < 1e-14)
      throw InputError("affine_projection: singular normal matrix");
    for (int r = col + 1; r < 3; ++r) {
      const double m = A[perm[r]][col] / A[perm[col]][col];
      for (int c = col; c < 3; ++c) A[perm[r]][c] -= m * A[perm[col]][c];
      b[perm[r]] -= m * b[perm[col]];
    }
  }
  double coef[3];
  for (int col = 2; col >= 0; --col) {
    double s = b[perm[col]];
    for (int c = col + 1; c < 3; ++c) s -= A[perm[col]][c] * coef[c];
    coef[col] = s / A[perm[col]][col];
  }
  GridField aff(W, H, 1, h);
  for (int j = 0; j < H; ++j)
    for (int i = 0; i < W; ++i)
      aff.at(i, j) = coef[0] + coef[1] * basis(1, i, j) + coef[2] * basis(2, i, j);
  return {aff, u - aff};
}

std::string StabilityReport::csv() const {
  std::ostringstream os;
  os << "seed," << seed << "\nnoise_level,objective_diff,minimizer_diff\n";
  os.precision(12);
  for (std::size_t k = 0; k < noise_level.size(); ++k)
    os << noise_level[k] << ',' << objective_diff[k] << ',' << minimizer_diff[k] << '\n';
  return os.str();
}

StabilityReport stability_experiment(const GridField& f, const std::vector<double>& noise_levels,
                                     const PhiSpec& phi, TgvWeights alpha, SolverConfig cfg,
                                     std::uint64_t seed) {
  for (std::size_t k = 1; k < noise_levels.size(); ++k)
    if (!(noise_levels[k] < noise_levels[k - 1]))
      throw InputError("stability_experiment: noise levels must be strictly decreasing");

  GridField eta(f.width(), f.height(), 1, f.h());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t k = 0; k < eta.size(); ++k) eta[k] = gauss(rng);
  const double n = norm2(eta);
  if (n > 0.0) eta *= 1.0 / n;

  OperatorPair K = identity_op(f.width(), f.height(), f.h());
  DenoiseResult base = denoise_tgv(f, K, phi, alpha, cfg);
  const double f0 = base.energy_trace.back();

  StabilityReport rep;
  rep.seed = seed;
  for (double delta : noise_levels) {
    GridField fd = f;
    fd.axpy(delta, eta);
    DenoiseResult r = denoise_tgv(fd, K, phi, alpha, cfg);
    rep.noise_level.push_back(delta);
    rep.objective_diff.push_back(std::fabs(r.energy_trace.back() - f0));
    rep.minimizer_diff.push_back(norm2(r.u_star - base.u_star));
  }
  rep.pass = true;
  for (std::size_t k = 1; k < rep.noise_level.size(); ++k) {
    if (rep.objective_diff[k] > 1.1 * rep.objective_diff[k - 1]) rep.pass = false;
    if (rep.minimizer_diff[k] > 1.1 * rep.minimizer_diff[k - 1]) rep.pass = false;
  }
  return rep;
}

}  // namespace motgv
