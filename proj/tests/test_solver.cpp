#include <doctest.h>

#include <cmath>
#include <random>

#include "motgv/solver.hpp"

using namespace motgv;

namespace {

GridField affine_field(int n, double a, double b, double c) {
  GridField u(n, n, 1);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      u.at(i, j) = a + b * (i + 0.5) * u.h() + c * (j + 0.5) * u.h();
  return u;
}

GridField random_field(int n, std::uint64_t seed) {
  GridField f(n, n, 1);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = unif(rng);
  return f;
}

}  // namespace

TEST_CASE("blur operator is self-adjoint") {
  OperatorPair K = blur_op(8, 8);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  GridField a(8, 8, 1), b(8, 8, 1);
  for (std::size_t k = 0; k < a.size(); ++k) {
    a[k] = unif(rng);
    b[k] = unif(rng);
  }
  CHECK(inner(K.forward(a), b) == doctest::Approx(inner(a, K.adjoint(b))).epsilon(1e-12));
  CHECK(K.norm_estimate <= 1.0 + 1e-9);  // averaging kernel
}

TEST_CASE("denoising an affine image returns it unchanged") {
  GridField f = affine_field(8, 0.4, 0.3, -0.2);
  OperatorPair K = identity_op(8, 8, f.h());
  SolverConfig cfg;
  cfg.max_iters = 400;
  DenoiseResult res = denoise_tgv(f, K, PhiSpec::power(1.5), {1.0, 1.0}, cfg);
  double worst = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k)
    worst = std::max(worst, std::fabs(res.u_star[k] - f[k]));
  CHECK(worst <= 1e-6);
  CHECK(res.energy_trace.back() <= 1e-12);
}

TEST_CASE("energy trace is non-increasing") {
  GridField f = random_field(8, 7);
  OperatorPair K = identity_op(8, 8, f.h());
  SolverConfig cfg;
  cfg.max_iters = 300;
  DenoiseResult res = denoise_tgv(f, K, PhiSpec::power(2.0), {0.5, 0.5}, cfg);
  for (std::size_t k = 1; k < res.energy_trace.size(); ++k)
    CHECK(res.energy_trace[k] <= res.energy_trace[k - 1] + 1e-12);
}

TEST_CASE("minimizer beats both natural candidates on noisy affine data") {
  GridField clean = affine_field(8, 0.5, 0.2, 0.1);
  GridField f = clean;
  std::mt19937_64 rng(9);
  std::normal_distribution<double> gauss(0.0, 0.1);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] += gauss(rng);
  OperatorPair K = identity_op(8, 8, f.h());
  PhiSpec phi = PhiSpec::power(1.0);
  TgvWeights alpha{0.05, 0.05};
  SolverConfig cfg;
  cfg.max_iters = 1500;
  DenoiseResult res = denoise_tgv(f, K, phi, alpha, cfg);
  const double at_f = denoise_objective(f, K, phi, alpha, f, grad_r(f));
  const double at_clean = denoise_objective(f, K, phi, alpha, clean, grad_r(clean));
  CHECK(res.energy_trace.back() <= at_f + 1e-12);
  CHECK(res.energy_trace.back() <= at_clean + 1e-12);
}

TEST_CASE("identity runs report a shrinking certified gap") {
  GridField f = random_field(6, 11);
  OperatorPair K = identity_op(6, 6, f.h());
  SolverConfig cfg;
  cfg.max_iters = 9000;
  cfg.tol_gap = 1e-7;
  DenoiseResult res = denoise_tgv(f, K, PhiSpec::power(2.0), {0.5, 0.5}, cfg);
  CHECK(res.gap_trace.back() < 1e-7);
  CHECK(res.iters_used < cfg.max_iters);  // converged before the cap
}

TEST_CASE("deblurring decreases the objective") {
  GridField f = random_field(8, 13);
  OperatorPair K = blur_op(8, 8, f.h());
  PhiSpec phi = PhiSpec::power(2.0);
  TgvWeights alpha{0.1, 0.1};
  SolverConfig cfg;
  cfg.max_iters = 250;
  DenoiseResult res = denoise_tgv(f, K, phi, alpha, cfg);
  CHECK(std::isnan(res.gap_trace.back()));  // no certified dual for blur
  CHECK(res.energy_trace.back() < denoise_objective(f, K, phi, alpha, f, grad_r(f)));
}

TEST_CASE("invalid step sizes are rejected") {
  GridField f = random_field(6, 15);
  OperatorPair K = identity_op(6, 6, f.h());
  SolverConfig cfg;
  cfg.tau = 10.0;
  cfg.sigma = 10.0;
  CHECK_THROWS_AS((void)denoise_tgv(f, K, PhiSpec::power(2.0), {1.0, 1.0}, cfg), InputError);
}

TEST_CASE("oracle matches the solver on a tiny instance") {
  GridField f = random_field(4, 17);
  OperatorPair K = identity_op(4, 4, f.h());
  PhiSpec phi = PhiSpec::power(1.5);
  TgvWeights alpha{0.5, 0.5};
  SolverConfig cfg;
  cfg.max_iters = 4000;
  cfg.tol_gap = 1e-9;
  DenoiseResult sol = denoise_tgv(f, K, phi, alpha, cfg);
  DenoiseResult ora = oracle_denoise(f, phi, alpha, 200);
  CHECK(std::fabs(sol.energy_trace.back() - ora.energy_trace.back()) /
            ora.energy_trace.back() <=
        1e-4);
  CHECK_THROWS_AS((void)oracle_denoise(GridField(9, 9, 1), phi, alpha, 10), InputError);
}

TEST_CASE("oracle on constant data returns it with zero objective") {
  GridField f(4, 4, 1);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = 0.6;
  DenoiseResult ora = oracle_denoise(f, PhiSpec::power(2.0), {1.0, 1.0}, 40);
  CHECK(ora.energy_trace.back() <= 1e-10);
  for (std::size_t k = 0; k < f.size(); ++k) CHECK(ora.u_star[k] == doctest::Approx(0.6).epsilon(1e-5));
}

TEST_CASE("affine projection") {
  GridField u = affine_field(6, 0.2, -0.7, 1.1);
  auto [aff, res] = affine_projection(u);
  CHECK(norm2(res) <= 1e-12);
  for (std::size_t k = 0; k < u.size(); ++k) CHECK(aff[k] == doctest::Approx(u[k]).epsilon(1e-12));

  // Idempotence on a generic field.
  GridField v = random_field(7, 19);
  auto [a1, r1] = affine_projection(v);
  auto [a2, r2] = affine_projection(a1);
  for (std::size_t k = 0; k < v.size(); ++k) CHECK(a2[k] == doctest::Approx(a1[k]).epsilon(1e-12));
  CHECK(std::fabs(inner(a1, r1)) <= 1e-12);  // residual orthogonal to the span

  // x1^2 on a symmetric grid has no x2 slope in its affine part.
  GridField q(6, 6, 1);
  for (int j = 0; j < 6; ++j)
    for (int i = 0; i < 6; ++i) {
      const double x = (i + 0.5) * q.h();
      q.at(i, j) = x * x;
    }
  auto [qa, qr] = affine_projection(q);
  CHECK(qa.at(2, 0) == doctest::Approx(qa.at(2, 5)).epsilon(1e-12));

  CHECK_THROWS_AS((void)affine_projection(GridField(5, 1, 1)), InputError);
}

TEST_CASE("stability experiment input validation") {
  GridField f = random_field(6, 21);
  CHECK_THROWS_AS(
      (void)stability_experiment(f, {0.1, 0.2}, PhiSpec::power(2.0), {1.0, 1.0}, {}, 7),
      InputError);
}
