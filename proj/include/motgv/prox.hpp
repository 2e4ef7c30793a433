#pragma once

#include "motgv/grid_field.hpp"
#include "motgv/phi.hpp"

namespace motgv {

// argmin_{s >= 0}  (s - z)^2 / 2 + mu * phi*(x, s / alpha).
// Safeguarded Newton to 1e-12 with bisection fallback.
double pointwise_prox_conjugate(const PhiSpec& phi_conj, std::size_t cell, double z, double mu,
                                double alpha);

// Euclidean projection of psi onto { rho_{phi*}(psi / alpha) <= 1 }, the
// alpha-scaled Luxemburg unit ball of the conjugate.  Pointwise directions are
// preserved; the KKT multiplier is bracketed and then refined by a
// safeguarded regula falsi.
GridField project_luxemburg_ball(const PhiSpec& phi, const GridField& psi, double alpha);

}  // namespace motgv
