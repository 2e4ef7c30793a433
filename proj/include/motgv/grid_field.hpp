#pragma once

#include <cmath>
#include <vector>

#include "motgv/common.hpp"

namespace motgv {

// Scalar, vector, or symmetric-tensor field on a uniform 2-D grid.
// Symmetric 2x2 tensors are stored as (xi11, xi22, xi12); the pointwise
// magnitude is the Frobenius norm sqrt(xi11^2 + xi22^2 + 2 xi12^2).
class GridField {
 public:
  GridField() = default;
  GridField(int width, int height, int channels, double h = 0.0)
      : width_(width), height_(height), channels_(channels), h_(h) {
    if (width <= 0 || height <= 0) throw InputError("GridField: non-positive dimensions");
    if (channels < 1 || channels > 3) throw InputError("GridField: channels must be 1, 2, or 3");
    if (h_ <= 0.0) h_ = 1.0 / static_cast<double>(width > height ? width : height);
    data_.assign(static_cast<std::size_t>(width) * height * channels, 0.0);
  }

  static GridField scalar(int w, int h, double spacing = 0.0) { return GridField(w, h, 1, spacing); }
  static GridField vector(int w, int h, double spacing = 0.0) { return GridField(w, h, 2, spacing); }
  static GridField tensor(int w, int h, double spacing = 0.0) { return GridField(w, h, 3, spacing); }

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  double h() const { return h_; }
  double cell_measure() const { return h_ * h_; }
  std::size_t cells() const { return static_cast<std::size_t>(width_) * height_; }
  std::size_t size() const { return data_.size(); }

  // (i, j) = (column, row), channel-interleaved storage.
  double& at(int i, int j, int c = 0) { return data_[(static_cast<std::size_t>(j) * width_ + i) * channels_ + c]; }
  double at(int i, int j, int c = 0) const { return data_[(static_cast<std::size_t>(j) * width_ + i) * channels_ + c]; }

  double& operator[](std::size_t k) { return data_[k]; }
  double operator[](std::size_t k) const { return data_[k]; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool same_grid(const GridField& o) const {
    return width_ == o.width_ && height_ == o.height_ && channels_ == o.channels_;
  }

  double magnitude(std::size_t cell) const {
    const double* p = &data_[cell * channels_];
    switch (channels_) {
      case 1: return std::fabs(p[0]);
      case 2: return std::sqrt(p[0] * p[0] + p[1] * p[1]);
      default: return std::sqrt(p[0] * p[0] + p[1] * p[1] + 2.0 * p[2] * p[2]);
    }
  }

  double max_magnitude() const {
    double m = 0.0;
    for (std::size_t c = 0; c < cells(); ++c) m = std::max(m, magnitude(c));
    return m;
  }

  GridField& operator+=(const GridField& o) { return axpy(1.0, o); }
  GridField& operator-=(const GridField& o) { return axpy(-1.0, o); }
  GridField& operator*=(double a) {
    for (double& x : data_) x *= a;
    return *this;
  }
  GridField& axpy(double a, const GridField& o) {
    if (!same_grid(o)) throw InputError("GridField: grid mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += a * o.data_[k];
    return *this;
  }

  friend GridField operator+(GridField a, const GridField& b) { return a += b; }
  friend GridField operator-(GridField a, const GridField& b) { return a -= b; }
  friend GridField operator*(double a, GridField f) { return f *= a; }

 private:
  int width_ = 0, height_ = 0, channels_ = 1;
  double h_ = 1.0;
  std::vector<double> data_;
};

// h^2-weighted inner product.  Tensor fields pair with the Frobenius product,
// which doubles the off-diagonal contribution.
double inner(const GridField& a, const GridField& b);

inline double norm2(const GridField& a) { return std::sqrt(inner(a, a)); }

}  // namespace motgv
