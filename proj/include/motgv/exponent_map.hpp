#pragma once

#include <string>
#include <vector>

#include "motgv/common.hpp"

namespace motgv {

inline constexpr double kDefaultPMax = 10.0;

// Per-cell variable exponent p(x) in [1, p_max].  Exponents within 1e-12 of 1
// are snapped to 1 so the set Y = {p = 1} is unambiguous; exponents above
// p_max are clipped with a warning.
class ExponentMap {
 public:
  ExponentMap() = default;
  ExponentMap(int width, int height, double fill = 2.0, double p_max = kDefaultPMax);

  static ExponentMap constant(int width, int height, double p, double p_max = kDefaultPMax) {
    return ExponentMap(width, height, p, p_max);
  }

  // CSV, row-major, one row per grid row; dimensions inferred.
  static ExponentMap load_csv(const std::string& path, double p_max = kDefaultPMax);
  void save_csv(const std::string& path) const;

  int width() const { return width_; }
  int height() const { return height_; }
  double p_max() const { return p_max_; }
  std::size_t cells() const { return p_.size(); }

  double p(std::size_t cell) const { return p_[cell]; }
  double p(int i, int j) const { return p_[static_cast<std::size_t>(j) * width_ + i]; }
  void set(int i, int j, double value) { p_[static_cast<std::size_t>(j) * width_ + i] = sanitize(value); }

  // Conjugate exponent; +inf on Y.
  double q(std::size_t cell) const {
    const double pv = p_[cell];
    return pv == 1.0 ? kInf : pv / (pv - 1.0);
  }
  bool on_Y(std::size_t cell) const { return p_[cell] == 1.0; }

  std::vector<bool> y_mask() const {
    std::vector<bool> m(p_.size());
    for (std::size_t c = 0; c < p_.size(); ++c) m[c] = on_Y(c);
    return m;
  }

 private:
  double sanitize(double value) const;

  int width_ = 0, height_ = 0;
  double p_max_ = kDefaultPMax;
  std::vector<double> p_;
};

}  // namespace motgv
