#include "motgv/phi.hpp"

#include <algorithm>
#include <cmath>

namespace motgv {

namespace {

double power_eval(double p, double t) {
  if (p == 1.0) return t;
  if (p == 2.0) return 0.5 * t * t;
  return std::pow(t, p) / p;
}

// phi*(t) for phi(s) = s^p / p: t^q / q when p > 1, indicator-type when p = 1.
double power_conjugate_eval(double p, double t) {
  if (p == 1.0) return t <= 1.0 ? 0.0 : kInf;
  const double q = p / (p - 1.0);
  return power_eval(q, t);
}

}  // namespace

PhiSpec PhiSpec::power(double p, double p_max) {
  if (!(p >= 1.0)) throw InputError("PhiSpec::power: p must be >= 1");
  PhiSpec s;
  s.family_ = PhiFamily::PowerConstant;
  s.p_ = std::min(p, p_max);
  if (s.p_ <= 1.0 + 1e-12) s.p_ = 1.0;
  return s;
}

PhiSpec PhiSpec::variable_exponent(ExponentMap map) {
  PhiSpec s;
  s.family_ = PhiFamily::VariableExponent;
  s.map_ = std::move(map);
  return s;
}

PhiSpec PhiSpec::piecewise_linear(std::vector<std::pair<double, double>> pieces) {
  for (auto [a, b] : pieces) {
    if (a < 0.0) throw InputError("piecewise_linear: negative slope");
    if (b > 1e-12) throw InputError("piecewise_linear: envelope positive at t=0");
  }
  pieces.emplace_back(0.0, 0.0);
  std::sort(pieces.begin(), pieces.end());
  // Upper envelope over t >= 0 (convex hull trick on slopes).
  std::vector<std::pair<double, double>> hull;
  for (auto pc : pieces) {
    while (!hull.empty()) {
      auto [a0, b0] = hull.back();
      if (a0 == pc.first) {
        if (b0 >= pc.second) goto skip;
        hull.pop_back();
        continue;
      }
      // Switch point between back() and pc; drop back() if it never wins.
      double x = (b0 - pc.second) / (pc.first - a0);
      if (hull.size() >= 2) {
        auto [a1, b1] = hull[hull.size() - 2];
        double xprev = (b1 - b0) / (a0 - a1);
        if (x <= xprev) {
          hull.pop_back();
          continue;
        }
      } else if (x <= 0.0) {
        hull.pop_back();
        continue;
      }
      break;
    }
    hull.push_back(pc);
  skip:;
  }
  PhiSpec s;
  s.family_ = PhiFamily::PiecewiseLinear;
  s.tail_certified_ = true;
  s.bt_.push_back(0.0);
  s.bv_.push_back(0.0);
  for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
    double x = (hull[k].second - hull[k + 1].second) / (hull[k + 1].first - hull[k].first);
    if (x > 0.0) {
      s.bt_.push_back(x);
      s.bv_.push_back(hull[k].first * x + hull[k].second);
      s.slope_.push_back(hull[k].first);
    }
  }
  s.slope_.push_back(hull.back().first);
  return s;
}

PhiSpec PhiSpec::tabulated(std::vector<double> t, std::vector<double> v,
                           std::optional<double> terminal_slope) {
  if (t.size() != v.size() || t.size() < 2) throw InputError("tabulated: need >= 2 samples");
  if (t[0] != 0.0 || v[0] != 0.0) throw InputError("tabulated: first sample must be (0, 0)");
  PhiSpec s;
  s.family_ = PhiFamily::Tabulated;
  double prev_slope = -kInf;
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    if (!(t[k + 1] > t[k])) throw InputError("tabulated: t samples not increasing");
    double sl = (v[k + 1] - v[k]) / (t[k + 1] - t[k]);
    if (sl < prev_slope - 1e-12) throw InputError("tabulated: samples not convex");
    if (sl < 0.0) throw InputError("tabulated: decreasing values");
    s.slope_.push_back(sl);
    prev_slope = sl;
  }
  if (terminal_slope) {
    if (*terminal_slope < prev_slope - 1e-12) throw InputError("tabulated: terminal slope breaks convexity");
    s.slope_.push_back(*terminal_slope);
    s.tail_certified_ = true;
  } else {
    s.slope_.push_back(s.slope_.back());
    s.tail_certified_ = false;
  }
  s.bt_ = std::move(t);
  s.bv_ = std::move(v);
  return s;
}

std::size_t PhiSpec::spatial_cells() const {
  return family_ == PhiFamily::VariableExponent ? map_.cells() : 1;
}

std::size_t PhiSpec::check_cell(std::size_t cell) const {
  if (family_ == PhiFamily::VariableExponent) {
    if (cell >= map_.cells()) throw InputError("PhiSpec: cell index out of range");
    return cell;
  }
  return 0;
}

double PhiSpec::eval_forward(std::size_t cell, double t) const {
  switch (family_) {
    case PhiFamily::PowerConstant:
      return power_eval(p_, t);
    case PhiFamily::VariableExponent:
      return power_eval(map_.p(cell), t);
    default: {
      // Polyline families share one spatial tile.
      auto it = std::upper_bound(bt_.begin(), bt_.end(), t);
      std::size_t k = static_cast<std::size_t>(it - bt_.begin());
      if (k == 0) return 0.0;  // t == 0
      --k;
      std::size_t last = bt_.size() - 1;
      if (k >= last) return bv_[last] + slope_.back() * (t - bt_[last]);
      return bv_[k] + slope_[k] * (t - bt_[k]);
    }
  }
}

double PhiSpec::eval_conjugate(std::size_t cell, double t) const {
  switch (family_) {
    case PhiFamily::PowerConstant:
      return power_conjugate_eval(p_, t);
    case PhiFamily::VariableExponent:
      return power_conjugate_eval(map_.p(cell), t);
    default: {
      if (!tail_certified_)
        throw UnsupportedFamilyError("PhiSpec: conjugate of tabulated family needs terminal slope");
      if (t > slope_.back()) return kInf;
      // sup_s [t s - phi(s)] is attained at a breakpoint.
      double best = 0.0;
      for (std::size_t k = 0; k < bt_.size(); ++k) best = std::max(best, t * bt_[k] - bv_[k]);
      return best;
    }
  }
}

double PhiSpec::eval(std::size_t cell, double t) const {
  if (!(t >= 0.0)) throw InputError("PhiSpec::eval: negative t");
  cell = check_cell(cell);
  return conjugated_ ? eval_conjugate(cell, t) : eval_forward(cell, t);
}

PhiSpec PhiSpec::conjugate() const {
  if (family_ != PhiFamily::PowerConstant && family_ != PhiFamily::VariableExponent &&
      !tail_certified_)
    throw UnsupportedFamilyError("PhiSpec: conjugate of tabulated family needs terminal slope");
  PhiSpec s = *this;
  s.conjugated_ = !conjugated_;  // all families convex, so phi** = phi
  return s;
}

double PhiSpec::recession(std::size_t cell) const {
  cell = check_cell(cell);
  if (conjugated_) {
    // Conjugates of the shipped families have bounded effective domain or
    // superlinear growth in every case.
    return kInf;
  }
  switch (family_) {
    case PhiFamily::PowerConstant:
      return p_ == 1.0 ? 1.0 : kInf;
    case PhiFamily::VariableExponent:
      return map_.on_Y(cell) ? 1.0 : kInf;
    default:
      if (!tail_certified_)
        throw UnsupportedFamilyError("PhiSpec: recession of tabulated family needs terminal slope");
      return slope_.back();
  }
}

double PhiSpec::left_derivative(std::size_t cell, double t) const {
  if (!(t > 0.0)) throw InputError("PhiSpec::left_derivative: t must be positive");
  cell = check_cell(cell);
  if (!conjugated_) {
    switch (family_) {
      case PhiFamily::PowerConstant:
        return std::pow(t, p_ - 1.0);
      case PhiFamily::VariableExponent:
        return std::pow(t, map_.p(cell) - 1.0);
      default: {
        auto it = std::lower_bound(bt_.begin(), bt_.end(), t);
        std::size_t k = static_cast<std::size_t>(it - bt_.begin());
        // Segment strictly left of t; at a breakpoint take the left slope.
        if (k == 0) k = 1;
        return slope_[std::min(k - 1, slope_.size() - 1)];
      }
    }
  }
  const double p = exponent_based() ? exponent_at(cell) : 0.0;
  if (exponent_based()) {
    if (p == 1.0) {
      if (t > 1.0) throw InputError("PhiSpec::left_derivative: outside conjugate domain");
      return 0.0;
    }
    return std::pow(t, p / (p - 1.0) - 1.0);
  }
  // Conjugate of a polyline: derivative is the active breakpoint abscissa.
  if (t > slope_.back()) throw InputError("PhiSpec::left_derivative: outside conjugate domain");
  double best = 0.0, arg = 0.0;
  for (std::size_t k = 0; k < bt_.size(); ++k) {
    double val = t * bt_[k] - bv_[k];
    if (val > best || (val == best && bt_[k] < arg)) {
      best = val;
      arg = bt_[k];
    }
  }
  return arg;
}

double PhiSpec::exponent_at(std::size_t cell) const {
  cell = check_cell(cell);
  switch (family_) {
    case PhiFamily::PowerConstant:
      return p_;
    case PhiFamily::VariableExponent:
      return map_.p(cell);
    default:
      throw UnsupportedFamilyError("PhiSpec: family has no exponent");
  }
}

A0Report check_A0(const PhiSpec& phi, const std::vector<double>& beta_grid) {
  if (beta_grid.empty()) throw InputError("check_A0: empty beta grid");
  const std::size_t n = phi.spatial_cells();
  for (double beta : beta_grid) {
    if (!(beta > 0.0 && beta <= 1.0)) continue;
    bool ok = true;
    for (std::size_t c = 0; c < n && ok; ++c)
      ok = phi.eval(c, beta) <= 1.0 && phi.eval(c, 1.0 / beta) >= 1.0;
    if (ok) return {true, beta};
  }
  return {false, std::nullopt};
}

GrowthReport check_aInc_aDec(const PhiSpec& phi, double p_test, double q_test,
                             const std::vector<double>& t_samples) {
  GrowthReport rep;
  rep.L_inc = 1.0;
  rep.L_dec = 1.0;
  const std::size_t n = phi.spatial_cells();
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<double> ri, rd;
    for (double t : t_samples) {
      if (!(t > 0.0)) throw InputError("check_aInc_aDec: t samples must be positive");
      const double v = phi.eval(c, t);
      ri.push_back(v / std::pow(t, p_test));
      rd.push_back(v / std::pow(t, q_test));
    }
    for (std::size_t a = 0; a < ri.size(); ++a) {
      for (std::size_t b = a + 1; b < ri.size(); ++b) {
        // aInc: ri[a] <= L * ri[b];  aDec: rd[b] <= L * rd[a].
        if (ri[b] > 0.0 && std::isfinite(ri[a])) rep.L_inc = std::max(rep.L_inc, ri[a] / ri[b]);
        else if (ri[a] > 0.0 && ri[b] == 0.0) rep.L_inc = kInf;
        if (rd[a] > 0.0 && std::isfinite(rd[b])) rep.L_dec = std::max(rep.L_dec, rd[b] / rd[a]);
        else if (rd[b] > 0.0 && rd[a] == 0.0) rep.L_dec = kInf;
        if (std::isinf(ri[a]) && std::isfinite(ri[b])) rep.L_inc = kInf;
        if (std::isinf(rd[b]) && std::isfinite(rd[a])) rep.L_dec = kInf;
      }
    }
  }
  rep.aInc_holds = std::isfinite(rep.L_inc);
  rep.aDec_holds = std::isfinite(rep.L_dec);
  return rep;
}

NumericConjugate conjugate_numeric_fn(const std::function<double(double)>& phi_of_s, double t,
                                      double s_max, int n_samples) {
  if (n_samples < 2 || !(s_max > 0.0)) throw InputError("conjugate_numeric: bad sampling");
  const double ds = s_max / (n_samples - 1);
  double best = -kInf;
  int best_k = 0;
  for (int k = 0; k < n_samples; ++k) {
    const double s = k * ds;
    const double ph = phi_of_s(s);
    if (std::isnan(ph)) throw NumericError("conjugate_numeric: NaN integrand");
    const double g = std::isinf(ph) ? -kInf : s * t - ph;
    if (g > best) {
      best = g;
      best_k = k;
    }
  }
  if (best == -kInf) throw NumericError("conjugate_numeric: integrand infinite everywhere");
  // Golden-section refinement around the best sample; s t - phi(s) is concave.
  double a = std::max(0.0, (best_k - 1) * ds);
  double b = std::min(s_max, (best_k + 1) * ds);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  auto g = [&](double s) {
    const double ph = phi_of_s(s);
    return std::isinf(ph) ? -kInf : s * t - ph;
  };
  double g1 = g(x1), g2 = g(x2);
  for (int it = 0; it < 80 && b - a > 1e-14 * (1.0 + b); ++it) {
    if (g1 < g2) {
      a = x1;
      x1 = x2;
      g1 = g2;
      x2 = a + gr * (b - a);
      g2 = g(x2);
    } else {
      b = x2;
      x2 = x1;
      g2 = g1;
      x1 = b - gr * (b - a);
      g1 = g(x1);
    }
  }
  NumericConjugate out;
  out.value = std::max(best, std::max(g1, g2));
  out.value = std::max(out.value, 0.0);  // s = 0 is always admissible
  out.lower_bound = best_k == n_samples - 1;
  return out;
}

NumericConjugate eval_conjugate_numeric(const PhiSpec& phi, std::size_t cell, double t,
                                        double s_max, int n_samples) {
  if (!(t >= 0.0)) throw InputError("eval_conjugate_numeric: negative t");
  return conjugate_numeric_fn([&](double s) { return phi.eval(cell, s); }, t, s_max, n_samples);
}

}  // namespace motgv
