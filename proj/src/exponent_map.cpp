#include "motgv/exponent_map.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace motgv {

ExponentMap::ExponentMap(int width, int height, double fill, double p_max)
    : width_(width), height_(height), p_max_(p_max) {
  if (width <= 0 || height <= 0) throw InputError("ExponentMap: non-positive dimensions");
  if (p_max_ < 1.0) throw InputError("ExponentMap: p_max < 1");
  p_.assign(static_cast<std::size_t>(width) * height, 0.0);
  const double v = sanitize(fill);
  for (double& x : p_) x = v;
}

double ExponentMap::sanitize(double value) const {
  if (!(value >= 1.0)) {
    if (value > 1.0 - 1e-12) value = 1.0;
    else throw InputError("ExponentMap: exponent below 1");
  }
  if (value <= 1.0 + 1e-12) return 1.0;
  if (value > p_max_) {
    static bool warned = false;
    if (!warned) {
      std::fprintf(stderr, "motgv: exponent %.6g clipped to p_max=%.6g\n", value, p_max_);
      warned = true;
    }
    return p_max_;
  }
  return value;
}

ExponentMap ExponentMap::load_csv(const std::string& path, double p_max) {
  std::ifstream in(path);
  if (!in) throw InputError("ExponentMap: cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        row.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw InputError("ExponentMap: bad value '" + tok + "' in " + path);
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError("ExponentMap: empty file " + path);
  const std::size_t w = rows[0].size();
  for (const auto& r : rows)
    if (r.size() != w) throw InputError("ExponentMap: ragged rows in " + path);
  ExponentMap m(static_cast<int>(w), static_cast<int>(rows.size()), 2.0, p_max);
  for (int j = 0; j < m.height(); ++j)
    for (int i = 0; i < m.width(); ++i) m.set(i, j, rows[j][i]);
  return m;
}

void ExponentMap::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw InputError("ExponentMap: cannot write " + path);
  out.precision(17);
  for (int j = 0; j < height_; ++j) {
    for (int i = 0; i < width_; ++i) {
      if (i) out << ',';
      out << p(i, j);
    }
    out << '\n';
  }
}

}  // namespace motgv
