#include "motgv/grid_ops.hpp"

#include <cmath>
#include <random>

namespace motgv {

namespace {

// dst channel cd += forward x-difference of src channel cs.
void fwd_x(const GridField& src, int cs, GridField& dst, int cd, double sign = 1.0) {
  const double ih = sign / src.h();
  for (int j = 0; j < src.height(); ++j)
    for (int i = 0; i + 1 < src.width(); ++i)
      dst.at(i, j, cd) += (src.at(i + 1, j, cs) - src.at(i, j, cs)) * ih;
}

void fwd_y(const GridField& src, int cs, GridField& dst, int cd, double sign = 1.0) {
  const double ih = sign / src.h();
  for (int j = 0; j + 1 < src.height(); ++j)
    for (int i = 0; i < src.width(); ++i)
      dst.at(i, j, cd) += (src.at(i, j + 1, cs) - src.at(i, j, cs)) * ih;
}

// Negative adjoint of fwd_x: backward difference dropping the phantom entries.
void bwd_x(const GridField& src, int cs, GridField& dst, int cd) {
  const double ih = 1.0 / src.h();
  const int W = src.width();
  for (int j = 0; j < src.height(); ++j)
    for (int i = 0; i < W; ++i) {
      double v = 0.0;
      if (i + 1 < W) v += src.at(i, j, cs);
      if (i > 0) v -= src.at(i - 1, j, cs);
      dst.at(i, j, cd) += v * ih;
    }
}

void bwd_y(const GridField& src, int cs, GridField& dst, int cd) {
  const double ih = 1.0 / src.h();
  const int H = src.height();
  for (int j = 0; j < H; ++j)
    for (int i = 0; i < src.width(); ++i) {
      double v = 0.0;
      if (j + 1 < H) v += src.at(i, j, cs);
      if (j > 0) v -= src.at(i, j - 1, cs);
      dst.at(i, j, cd) += v * ih;
    }
}

}  // namespace

GridField grad(const GridField& u) {
  if (u.channels() != 1) throw InputError("grad: expects a scalar field");
  GridField g(u.width(), u.height(), 2, u.h());
  fwd_x(u, 0, g, 0);
  fwd_y(u, 0, g, 1);
  return g;
}

GridField sym_grad(const GridField& w) {
  if (w.channels() != 2) throw InputError("sym_grad: expects a vector field");
  GridField e(w.width(), w.height(), 3, w.h());
  fwd_x(w, 0, e, 0);
  fwd_y(w, 1, e, 1);
  fwd_y(w, 0, e, 2, 0.5);
  fwd_x(w, 1, e, 2, 0.5);
  return e;
}

GridField div_vector(const GridField& w) {
  if (w.channels() != 2) throw InputError("div_vector: expects a vector field");
  GridField d(w.width(), w.height(), 1, w.h());
  bwd_x(w, 0, d, 0);
  bwd_y(w, 1, d, 0);
  return d;
}

GridField div_tensor(const GridField& xi) {
  if (xi.channels() != 3) throw InputError("div_tensor: expects a tensor field");
  GridField d(xi.width(), xi.height(), 2, xi.h());
  bwd_x(xi, 0, d, 0);
  bwd_y(xi, 2, d, 0);
  bwd_x(xi, 2, d, 1);
  bwd_y(xi, 1, d, 1);
  return d;
}

GridField div2(const GridField& xi) { return div_vector(div_tensor(xi)); }

GridField grad_r(const GridField& u) {
  if (u.channels() != 1) throw InputError("grad_r: expects a scalar field");
  GridField g(u.width(), u.height(), 2, u.h());
  const int W = u.width(), H = u.height();
  const double ih = 1.0 / u.h();
  for (int j = 0; j < H; ++j)
    for (int i = 0; i < W; ++i) {
      if (W >= 2) {
        const int a = i < W - 1 ? i : W - 2;  // replicate the last difference
        g.at(i, j, 0) = (u.at(a + 1, j) - u.at(a, j)) * ih;
      }
      if (H >= 2) {
        const int b = j < H - 1 ? j : H - 2;
        g.at(i, j, 1) = (u.at(i, b + 1) - u.at(i, b)) * ih;
      }
    }
  return g;
}

GridField div_vector_r(const GridField& v) {
  if (v.channels() != 2) throw InputError("div_vector_r: expects a vector field");
  GridField d(v.width(), v.height(), 1, v.h());
  const int W = v.width(), H = v.height();
  const double ih = 1.0 / v.h();
  // Negative adjoint of the replicated forward difference: the last row of
  // the difference matrix repeats row W-2, which folds the final dual value
  // into columns W-2 and W-1.
  for (int j = 0; j < H; ++j)
    for (int i = 0; i < W && W >= 2; ++i) {
      double s = 0.0;
      if (i <= W - 3) {
        s += v.at(i, j, 0);
        if (i > 0) s -= v.at(i - 1, j, 0);
      } else if (i == W - 2) {
        s += v.at(W - 2, j, 0) + v.at(W - 1, j, 0);
        if (i > 0) s -= v.at(i - 1, j, 0);
      } else {
        s -= v.at(W - 2, j, 0) + v.at(W - 1, j, 0);
      }
      d.at(i, j) += s * ih;
    }
  for (int j = 0; j < H && H >= 2; ++j)
    for (int i = 0; i < W; ++i) {
      double s = 0.0;
      if (j <= H - 3) {
        s += v.at(i, j, 1);
        if (j > 0) s -= v.at(i, j - 1, 1);
      } else if (j == H - 2) {
        s += v.at(i, H - 2, 1) + v.at(i, H - 1, 1);
        if (j > 0) s -= v.at(i, j - 1, 1);
      } else {
        s -= v.at(i, H - 2, 1) + v.at(i, H - 1, 1);
      }
      d.at(i, j) += s * ih;
    }
  return d;
}

double operator_norm(const std::function<GridField(const GridField&)>& forward,
                     const std::function<GridField(const GridField&)>& adjoint,
                     const FieldShape& input, int iters, std::uint64_t seed) {
  GridField v(input.width, input.height, input.channels, input.h);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = unif(rng);
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    const double nv = norm2(v);
    if (nv == 0.0) return 0.0;
    v *= 1.0 / nv;
    GridField av = adjoint(forward(v));
    lambda = inner(v, av);
    v = std::move(av);
  }
  return std::sqrt(std::max(lambda, 0.0));
}

OperatorPair grad_op(int width, int height, double h) {
  OperatorPair op;
  op.forward = [](const GridField& u) { return grad(u); };
  op.adjoint = [](const GridField& w) {
    GridField d = div_vector(w);
    d *= -1.0;
    return d;
  };
  op.norm_estimate = operator_norm(op.forward, op.adjoint, {width, height, 1, h});
  return op;
}

OperatorPair sym_grad_op(int width, int height, double h) {
  OperatorPair op;
  op.forward = [](const GridField& w) { return sym_grad(w); };
  op.adjoint = [](const GridField& xi) {
    GridField d = div_tensor(xi);
    d *= -1.0;
    return d;
  };
  op.norm_estimate = operator_norm(op.forward, op.adjoint, {width, height, 2, h});
  return op;
}

}  // namespace motgv
