#pragma once

#include <cstdint>

#include "motgv/tgv.hpp"

namespace motgv {

struct SolverConfig {
  int max_iters = 5000;
  double tol_gap = 1e-6;   // relative duality gap
  double tau = 0.0;        // 0 = auto from the stacked operator norm
  double sigma = 0.0;
  int power_iters = 50;
};

struct DenoiseResult {
  GridField u_star;
  GridField w_star;
  // Objective of the best iterate so far, one entry per iteration; the raw
  // primal-dual iterates oscillate, the running best does not.
  std::vector<double> energy_trace;
  // Relative duality gap per iteration; NaN when K is not the identity (no
  // exact inner minimization available for the certified dual value).
  std::vector<double> gap_trace;
  int iters_used = 0;
};

OperatorPair identity_op(int width, int height, double h = 0.0);
// 3x3 binomial blur with zero padding; symmetric, hence self-adjoint.
OperatorPair blur_op(int width, int height, double h = 0.0);

// Exact denoising objective 0.5 ||K u - f||^2 + alpha2 V(Du - w) + alpha1 V(Ew).
double denoise_objective(const GridField& f, const OperatorPair& K, const PhiSpec& phi,
                         TgvWeights alpha, const GridField& u, const GridField& w);

// Primal-dual iteration on the saddle form of the objective: dual ascent with
// Luxemburg-ball projections, quadratic prox in u, extrapolation factor 1.
// u0/w0 warm-start the primal iterates (default: u = f, w = Du).
DenoiseResult denoise_tgv(const GridField& f, const OperatorPair& K, const PhiSpec& phi,
                          TgvWeights alpha, SolverConfig cfg = {},
                          const GridField* u0 = nullptr, const GridField* w0 = nullptr);

// Reference minimizer for desk-scale cross-checks (grids up to 8x8): cyclic
// coordinate descent with golden-section line searches over every u and w
// cell, on the Moreau-smoothed objective with a decreasing smoothing schedule.
DenoiseResult oracle_denoise(const GridField& f, const PhiSpec& phi, TgvWeights alpha,
                             int sweeps = 400);

// h^2-weighted L2 projection onto span{1, x1, x2}; returns the affine part,
// residual = u - affine part.  1xN grids are rejected (rank-deficient).
std::pair<GridField, GridField> affine_projection(const GridField& u);

struct StabilityReport {
  std::uint64_t seed = 0;
  std::vector<double> noise_level;
  std::vector<double> objective_diff;   // |min F_delta - min F_0|
  std::vector<double> minimizer_diff;   // ||u*_delta - u*_0||_2
  bool pass = false;                    // both columns non-increasing, 10% slack
  std::string csv() const;
};

StabilityReport stability_experiment(const GridField& f, const std::vector<double>& noise_levels,
                                     const PhiSpec& phi, TgvWeights alpha, SolverConfig cfg = {},
                                     std::uint64_t seed = 7);

}  // namespace motgv
