#pragma once

#include <cstdint>
#include <functional>

#include "motgv/grid_field.hpp"

namespace motgv {

// Forward differences with a zero row/column at the far boundary; the
// divergence operators below are their exact negative adjoints under the
// h^2-weighted pairing (off-diagonal tensor entries counted twice).

// scalar -> vector
GridField grad(const GridField& u);
// vector -> symmetric tensor
GridField sym_grad(const GridField& w);
// vector -> scalar, <grad u, w> = -<u, div_vector w>
GridField div_vector(const GridField& w);
// symmetric tensor -> vector, <sym_grad w, xi> = -<w, div_tensor xi>
GridField div_tensor(const GridField& xi);
// scalar second divergence, exactly div_vector(div_tensor(xi))
GridField div2(const GridField& xi);

// First-order gradient used inside the TGV functionals: the far-boundary
// one-sided difference is replicated instead of zeroed, so discrete affine
// fields have an exactly constant gradient and TGV annihilates them.
GridField grad_r(const GridField& u);
// exact negative adjoint of grad_r
GridField div_vector_r(const GridField& v);

struct OperatorPair {
  std::function<GridField(const GridField&)> forward;
  std::function<GridField(const GridField&)> adjoint;
  double norm_estimate = 0.0;
};

struct FieldShape {
  int width = 0, height = 0, channels = 1;
  double h = 0.0;
};

// Power iteration on adjoint(forward(.)), 50 rounds by default.
double operator_norm(const std::function<GridField(const GridField&)>& forward,
                     const std::function<GridField(const GridField&)>& adjoint,
                     const FieldShape& input, int iters = 50, std::uint64_t seed = 1);

OperatorPair grad_op(int width, int height, double h = 0.0);
OperatorPair sym_grad_op(int width, int height, double h = 0.0);

}  // namespace motgv
