#pragma once

#include "motgv/grid_field.hpp"
#include "motgv/phi.hpp"

namespace motgv {

struct VariationResult {
  double value = 0.0;
  // Minimizing scale hit the search bracket edge; the exact value may be the
  // plain weighted l1 mass (scale -> infinity limit).
  bool saturated = false;
};

// rho_phi(f) = sum_x phi(x, |f(x)|) h^2.  Extended real.
double modular(const PhiSpec& phi, const GridField& f);

// inf { lambda > 0 : rho_phi(f / lambda) <= 1 }, bisection to 1e-10.
double luxemburg_norm(const PhiSpec& phi, const GridField& f);

// Anisotropic variation of a discrete field: the associate-space pairing
// sup { <psi, f> : ||psi||_{phi*} <= 1 }, computed through the scale formula
// inf_{mu > 0} mu (1 + rho_phi(f / mu)).
VariationResult anisotropic_variation(const PhiSpec& phi, const GridField& f);

// rho_{phi**} evaluated on pointwise magnitudes; equals the modular for the
// shipped convex families.
double dual_modular(const PhiSpec& phi, const GridField& f);

// Luxemburg norm of the dual modular.
double modular_seminorm(const PhiSpec& phi, const GridField& f);

// Brute-force variation oracle: projected gradient ascent over the dual ball
// { ||psi||_{phi*} <= 1 }.  Grids up to 16x16.
double oracle_variation(const PhiSpec& phi, const GridField& f, int iters = 4000);

}  // namespace motgv
