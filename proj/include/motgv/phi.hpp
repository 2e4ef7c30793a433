#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "motgv/common.hpp"
#include "motgv/exponent_map.hpp"

namespace motgv {

enum class PhiFamily { PowerConstant, VariableExponent, PiecewiseLinear, Tabulated };

struct A0Report {
  bool holds = false;
  std::optional<double> witness_beta;
};

struct GrowthReport {
  bool aInc_holds = false;
  bool aDec_holds = false;
  double L_inc = kInf;  // smallest admissible almost-increasing constant
  double L_dec = kInf;
};

struct NumericConjugate {
  double value = 0.0;
  bool lower_bound = false;  // supremum saturated at the sampling edge
};

// Spatially-varying Phi-function phi(x, t): non-decreasing in t, phi(x,0) = 0,
// with t -> phi(x,t)/t non-decreasing.  All shipped families are convex.
// Immutable after construction; evaluations are pure.
class PhiSpec {
 public:
  // t^p / p everywhere.
  static PhiSpec power(double p, double p_max = kDefaultPMax);
  // t^{p(x)} / p(x) with per-cell exponents.
  static PhiSpec variable_exponent(ExponentMap map);
  // max over affine pieces (slope, intercept) and the zero function;
  // slopes must be nonnegative and the envelope must vanish at t = 0.
  static PhiSpec piecewise_linear(std::vector<std::pair<double, double>> pieces);
  // Linear interpolation of samples (t_k, v_k) with t_0 = 0, v_0 = 0 and
  // non-decreasing segment slopes.  Beyond the last sample the last segment
  // slope is used unless a terminal slope is given; recession and conjugation
  // require the explicit terminal slope.
  static PhiSpec tabulated(std::vector<double> t, std::vector<double> v,
                           std::optional<double> terminal_slope = {});

  PhiFamily family() const { return family_; }
  bool conjugated() const { return conjugated_; }
  // Number of distinct spatial cells (1 for x-independent families).
  std::size_t spatial_cells() const;

  // phi(x, t); extended real.  Throws InputError for t < 0 or cell out of range.
  double eval(std::size_t cell, double t) const;
  // Fenchel conjugate phi*(x, t) = sup_{s>=0} [s t - phi(x, s)], closed form.
  PhiSpec conjugate() const;
  // phi^infty(x) = limsup_{t->inf} phi(x, t) / t.
  double recession(std::size_t cell) const;
  // Left derivative in t, t > 0.
  double left_derivative(std::size_t cell, double t) const;

  // Per-cell exponent for prox kernels; UnsupportedFamilyError unless the
  // family is exponent-based.  Conjugated specs report the primal exponent.
  double exponent_at(std::size_t cell) const;
  bool exponent_based() const {
    return family_ == PhiFamily::PowerConstant || family_ == PhiFamily::VariableExponent;
  }
  const ExponentMap* exponent_map() const {
    return family_ == PhiFamily::VariableExponent ? &map_ : nullptr;
  }

 private:
  PhiSpec() = default;
  double eval_forward(std::size_t cell, double t) const;
  double eval_conjugate(std::size_t cell, double t) const;
  std::size_t check_cell(std::size_t cell) const;

  PhiFamily family_ = PhiFamily::PowerConstant;
  bool conjugated_ = false;
  double p_ = 2.0;      // PowerConstant
  ExponentMap map_;     // VariableExponent
  // Polyline data (PiecewiseLinear / Tabulated): breakpoints and slopes,
  // slope_[k] on [t_[k], t_[k+1]), slope_.back() past the last breakpoint.
  std::vector<double> bt_, bv_, slope_;
  bool tail_certified_ = false;
};

// (A0): some beta in (0,1] with phi(x,beta) <= 1 <= phi(x,1/beta) at every cell.
A0Report check_A0(const PhiSpec& phi, const std::vector<double>& beta_grid);

// (aInc)_p / (aDec)_q over sampled t pairs; reports the smallest admissible
// almost-monotonicity constants over all cells.
GrowthReport check_aInc_aDec(const PhiSpec& phi, double p_test, double q_test,
                             const std::vector<double>& t_samples);

// Brute-force sup_{s in [0, s_max]} [s t - phi(x, s)] on a sample grid refined
// by golden section.  A certified lower bound on the conjugate.
NumericConjugate eval_conjugate_numeric(const PhiSpec& phi, std::size_t cell, double t,
                                        double s_max = 50.0, int n_samples = 2001);

// Same oracle on an arbitrary integrand (used to nest the conjugation).
NumericConjugate conjugate_numeric_fn(const std::function<double(double)>& phi_of_s, double t,
                                      double s_max, int n_samples);

}  // namespace motgv
