#pragma once

#include <array>
#include <optional>
#include <string>

#include "motgv/grid_ops.hpp"
#include "motgv/orlicz.hpp"

namespace motgv {

struct TgvWeights {
  double alpha1 = 1.0;  // bounds the second-order dual field
  double alpha2 = 1.0;  // bounds its divergence
};

struct TgvOptions {
  int max_iters = 20000;       // total FISTA iterations across smoothing stages
  double tol = 1e-8;           // target gap
  double gamma_init = 1e-2;
  double gamma_min = 1e-7;
  double gamma_factor = 0.1;
};

struct TgvResult {
  double value = 0.0;                        // upper bound, exact variation at w_opt
  GridField w_opt;                           // minimizing auxiliary field
  std::optional<GridField> dual_certificate; // feasible tensor field, if extracted
  double gap = kInf;                         // value minus certified dual bound
  int iters_used = 0;
  bool converged = false;
};

// min over vector fields w of alpha2 * variation(grad u - w) + alpha1 *
// variation(sym_grad w), by accelerated descent on Moreau-smoothed variation
// terms with a decreasing smoothing schedule.
TgvResult tgv2_primal(const PhiSpec& phi, TgvWeights alpha, const GridField& u,
                      TgvOptions opts = {});

// sup of <u, div2 psi> over the two dual balls, by primal-dual splitting with
// alternating ball projections.  Returns a certified lower bound (the best
// objective over exactly feasible iterates).  Grids up to 32x32.
double tgv2_dual(const PhiSpec& phi, TgvWeights alpha, const GridField& u, int max_iters = 30000);

// First-order degenerate case: alpha * variation(grad u).
double tgv1(const PhiSpec& phi, double alpha, const GridField& u);

// Quarter-turn rotation of a square scalar field (grid-exact).
GridField rotate90(const GridField& u);

struct RotationReport {
  double base = 0.0;
  std::array<double, 3> rotated{};  // 90, 180, 270 degrees
  double max_rel_err = 0.0;
  bool pass = false;
};
// x-independent phi, square grid; checks invariance under quarter turns.
RotationReport tgv_rotation_check(const PhiSpec& phi, TgvWeights alpha, const GridField& u,
                                  double rel_tol = 1e-6, TgvOptions opts = {});

// r x r block replication with spacing shrunk by r^2; represents u(r.) on the
// contracted domain.
GridField block_replicate(const GridField& u, int r);

struct ScalingReport {
  double lhs = 0.0;   // TGV of the zoomed field at weights alpha
  double rhs = 0.0;   // r^-2 TGV of u at weights (alpha1 r^2, alpha2 r)
  double ratio = 1.0;
};
ScalingReport tgv_scaling_check(const PhiSpec& phi, TgvWeights alpha, const GridField& u, int r,
                                TgvOptions opts = {});

// p = 1 on the vertical strip |x - 1/2| <= 1/8, p_outside elsewhere.
ExponentMap make_strip_map(int n, double p_outside);

struct DecompositionReport {
  std::vector<int> level;               // grid = 2^level
  std::vector<double> total;            // dual modular of the full deformation
  std::vector<double> smooth_part;      // dual modular of the smooth deformation
  std::vector<double> singular_estimate;
  std::vector<double> ratio;            // total growth per refinement
  bool divergent = false;               // p > 1 on the jump line
  std::string table() const;
  std::string csv() const;
};

// u = smooth bump + vertical jump at x = 1/2 on grids 2^k, k = 3..levels,
// evaluated through the deformation of the vector field (u, 0).  phi is either
// a constant-exponent spec or a variable-exponent prototype resampled to each
// level.  levels > 8 is refused as a resource bound.
DecompositionReport decomposition_experiment(const PhiSpec& phi, double jump_height, int levels);

}  // namespace motgv
