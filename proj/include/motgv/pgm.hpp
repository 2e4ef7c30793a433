#pragma once

#include <map>
#include <string>

#include "motgv/exponent_map.hpp"
#include "motgv/grid_field.hpp"

namespace motgv {

struct PgmImage {
  GridField field;   // values in [0, 1]
  int maxval = 255;
  bool binary = false;  // P5 as opposed to P2
};

// P2 (ASCII) or P5 (binary), maxval up to 65535.  Malformed input raises
// InputError carrying the byte offset.
PgmImage load_pgm(const std::string& path);

// Canonical writer; P2 output of a loaded P2 file is byte-identical when the
// input was produced by this writer.
void save_pgm(const std::string& path, const PgmImage& img);
void save_pgm(const std::string& path, const GridField& f, int maxval = 255, bool binary = false);

// Edge-adaptive exponent layout: p = 1 + 1 / (1 + k |grad(G_sigma * f)|^2),
// clipped to [1, 2].
ExponentMap make_pmap(const GridField& image, double k, double sigma);

// Flat key=value configuration with '#' comments.
std::map<std::string, std::string> load_config(const std::string& path);

}  // namespace motgv
