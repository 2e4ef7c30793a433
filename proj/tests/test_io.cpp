#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "motgv/pgm.hpp"

using namespace motgv;

namespace {

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return s;
}

}  // namespace

TEST_CASE("P2 load scales to [0, 1]") {
  const std::string path = tmp_path("motgv_t1.pgm");
  write_file(path, "P2\n2 2\n255\n0 255\n255 0\n");
  PgmImage img = load_pgm(path);
  CHECK_FALSE(img.binary);
  CHECK(img.maxval == 255);
  CHECK(img.field.at(0, 0) == 0.0);
  CHECK(img.field.at(1, 0) == 1.0);
  CHECK(img.field.at(0, 1) == 1.0);
  CHECK(img.field.at(1, 1) == 0.0);
}

TEST_CASE("P5 loads to the identical field") {
  const std::string p2 = tmp_path("motgv_t2a.pgm"), p5 = tmp_path("motgv_t2b.pgm");
  write_file(p2, "P2\n2 2\n255\n0 255\n255 0\n");
  write_file(p5, std::string("P5\n2 2\n255\n") + '\0' + '\xff' + '\xff' + '\0');
  PgmImage a = load_pgm(p2), b = load_pgm(p5);
  CHECK(b.binary);
  for (std::size_t k = 0; k < a.field.size(); ++k) CHECK(a.field[k] == b.field[k]);
}

TEST_CASE("16-bit binary pixels") {
  const std::string path = tmp_path("motgv_t3.pgm");
  std::string body = "P5\n1 1\n65535\n";
  body += '\x80';
  body += '\x00';  // 32768
  write_file(path, body);
  PgmImage img = load_pgm(path);
  CHECK(img.field.at(0, 0) == doctest::Approx(32768.0 / 65535.0));
}

TEST_CASE("malformed PGM inputs") {
  const std::string path = tmp_path("motgv_t4.pgm");
  write_file(path, "P3\n2 2\n255\n");
  CHECK_THROWS_WITH_AS((void)load_pgm(path), doctest::Contains("magic"), InputError);
  write_file(path, "P2\n2 2\n255\n0 255 255\n");
  CHECK_THROWS_WITH_AS((void)load_pgm(path), doctest::Contains("byte offset"), InputError);
  write_file(path, "P5\n4 4\n255\nxx");
  CHECK_THROWS_WITH_AS((void)load_pgm(path), doctest::Contains("truncated"), InputError);
  write_file(path, "P2\n2 2\n70000\n0 0 0 0\n");
  CHECK_THROWS_AS((void)load_pgm(path), InputError);
  CHECK_THROWS_AS((void)load_pgm(tmp_path("motgv_missing.pgm")), InputError);
}

TEST_CASE("P2 round-trip is byte-identical") {
  const std::string a = tmp_path("motgv_t5a.pgm"), b = tmp_path("motgv_t5b.pgm");
  write_file(a, "P2\n3 2\n255\n0 10 255\n7 0 99\n");
  PgmImage img = load_pgm(a);
  save_pgm(b, img);
  // The canonical writer reproduces its own output exactly.
  save_pgm(a, load_pgm(b));
  CHECK(read_file(a) == read_file(b));
}

TEST_CASE("pixel values above maxval are rejected") {
  const std::string path = tmp_path("motgv_t6.pgm");
  write_file(path, "P2\n2 1\n100\n50 101\n");
  CHECK_THROWS_WITH_AS((void)load_pgm(path), doctest::Contains("maxval"), InputError);
}

TEST_CASE("edge-adaptive exponent map") {
  GridField flat(8, 8, 1);
  for (std::size_t k = 0; k < flat.size(); ++k) flat[k] = 0.5;
  ExponentMap m = make_pmap(flat, 32.0, 1.0);
  for (std::size_t c = 0; c < m.cells(); ++c) CHECK(m.p(c) == doctest::Approx(2.0));

  GridField step(16, 16, 1);
  for (int j = 0; j < 16; ++j)
    for (int i = 0; i < 16; ++i) step.at(i, j) = i < 8 ? 0.0 : 1.0;
  // k = 0 ignores gradients entirely.
  ExponentMap k0 = make_pmap(step, 0.0, 1.0);
  for (std::size_t c = 0; c < k0.cells(); ++c) CHECK(k0.p(c) == doctest::Approx(2.0));
  ExponentMap e = make_pmap(step, 1e4, 0.8);
  CHECK(e.p(7, 8) <= 1.05);   // on the edge line
  CHECK(e.p(1, 8) >= 1.9);    // far from the edge
  for (std::size_t c = 0; c < e.cells(); ++c) {
    CHECK(e.p(c) >= 1.0);
    CHECK(e.p(c) <= 2.0);
  }
  CHECK_THROWS_AS((void)make_pmap(flat, 1.0, 0.0), InputError);
}

TEST_CASE("exponent map CSV round trip") {
  ExponentMap m(3, 2, 2.0);
  m.set(0, 0, 1.0);
  m.set(2, 1, 1.25);
  const std::string path = tmp_path("motgv_t7.csv");
  m.save_csv(path);
  ExponentMap back = ExponentMap::load_csv(path);
  CHECK(back.width() == 3);
  CHECK(back.height() == 2);
  for (std::size_t c = 0; c < m.cells(); ++c) CHECK(back.p(c) == m.p(c));
  CHECK(back.on_Y(0));
  CHECK_FALSE(back.on_Y(1));
}

TEST_CASE("exponent sanitation") {
  ExponentMap m(2, 2, 2.0);
  m.set(0, 0, 1.0 + 1e-13);  // snapped to the Y set
  CHECK(m.p(0, 0) == 1.0);
  CHECK(m.q(0) == kInf);
  m.set(1, 0, 50.0);  // clipped to p_max
  CHECK(m.p(1, 0) == m.p_max());
}

TEST_CASE("config parsing") {
  const std::string path = tmp_path("motgv_t8.cfg");
  write_file(path, "# header comment\nalpha1 = 0.5\n  pmap=edge  # trailing\n\nseed=9\n");
  auto cfg = load_config(path);
  CHECK(cfg.at("alpha1") == "0.5");
  CHECK(cfg.at("pmap") == "edge");
  CHECK(cfg.at("seed") == "9");
  write_file(path, "alpha1=1\nnot a pair\n");
  CHECK_THROWS_WITH_AS((void)load_config(path), doctest::Contains("line 2"), InputError);
  CHECK_THROWS_AS((void)load_config(tmp_path("motgv_missing.cfg")), InputError);
}
