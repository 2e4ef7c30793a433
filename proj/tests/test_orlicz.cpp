#include <doctest.h>

#include <cmath>
#include <random>

#include "motgv/orlicz.hpp"

using namespace motgv;

namespace {

GridField constant_field(int n, double v, int ch = 1) {
  GridField f(n, n, ch);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = v;
  return f;
}

GridField random_field(int n, int ch, std::uint64_t seed) {
  GridField f(n, n, ch);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = unif(rng);
  return f;
}

}  // namespace

TEST_CASE("modular closed forms on a measure-1 grid") {
  // 4x4 with the default h = 1/4 has total measure 1.
  GridField one = constant_field(4, 1.0);
  CHECK(modular(PhiSpec::power(2.0), one) == doctest::Approx(0.5));
  CHECK(modular(PhiSpec::power(2.0), constant_field(4, 0.0)) == 0.0);

  ExponentMap half(4, 4, 2.0);
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 2; ++i) half.set(i, j, 1.0);
  CHECK(modular(PhiSpec::variable_exponent(half), one) == doctest::Approx(0.75));
}

TEST_CASE("modular dimension mismatch") {
  PhiSpec phi = PhiSpec::variable_exponent(ExponentMap(3, 3, 2.0));
  CHECK_THROWS_AS((void)modular(phi, constant_field(4, 1.0)), InputError);
}

TEST_CASE("luxemburg norm closed forms") {
  GridField c = constant_field(4, 0.7);
  CHECK(luxemburg_norm(PhiSpec::power(2.0), c) == doctest::Approx(0.7 / std::sqrt(2.0)));
  CHECK(luxemburg_norm(PhiSpec::power(2.0), constant_field(4, 0.0)) == 0.0);

  GridField v = random_field(5, 1, 17);
  double l1 = 0.0;
  for (std::size_t k = 0; k < v.cells(); ++k) l1 += v.magnitude(k) * v.cell_measure();
  CHECK(luxemburg_norm(PhiSpec::power(1.0), v) == doctest::Approx(l1).epsilon(1e-8));
}

TEST_CASE("unit ball property") {
  GridField v = random_field(6, 2, 23);
  PhiSpec phi = PhiSpec::power(1.7);
  GridField scaled = v;
  scaled *= 1.0 / luxemburg_norm(phi, v);
  CHECK(modular(phi, scaled) <= 1.0 + 1e-9);
}

TEST_CASE("anisotropic variation closed forms") {
  GridField v = random_field(6, 2, 31);
  CHECK(anisotropic_variation(PhiSpec::power(2.0), v).value ==
        doctest::Approx(std::sqrt(2.0) * norm2(v)).epsilon(1e-8));
  double l1 = 0.0;
  for (std::size_t k = 0; k < v.cells(); ++k) l1 += v.magnitude(k) * v.cell_measure();
  CHECK(anisotropic_variation(PhiSpec::power(1.0), v).value == doctest::Approx(l1).epsilon(1e-8));
  CHECK(anisotropic_variation(PhiSpec::power(1.0), v).saturated);
  CHECK(anisotropic_variation(PhiSpec::power(2.0), constant_field(4, 0.0, 2)).value == 0.0);
}

TEST_CASE("variation agrees with the ascent oracle on a mixed map") {
  ExponentMap m(4, 4, 2.0);
  m.set(0, 0, 1.0);
  m.set(1, 2, 1.5);
  m.set(3, 3, 1.0);
  m.set(2, 1, 1.2);
  PhiSpec phi = PhiSpec::variable_exponent(m);
  GridField v = random_field(4, 2, 47);
  const double av = anisotropic_variation(phi, v).value;
  const double oracle = oracle_variation(phi, v, 4000);
  CHECK(oracle <= av * (1.0 + 1e-9));  // certified lower bound
  CHECK(std::fabs(av - oracle) / av <= 1e-4);
}

TEST_CASE("dual modular") {
  GridField v = random_field(5, 3, 59);
  CHECK(dual_modular(PhiSpec::power(2.0), v) ==
        doctest::Approx(modular(PhiSpec::power(2.0), v)).epsilon(1e-12));
  CHECK(dual_modular(PhiSpec::power(2.0), constant_field(4, 0.0, 3)) == 0.0);
  // Slope-1 recession at p = 1: pointwise sup over s in [0,1] of 2s is 2.
  CHECK(dual_modular(PhiSpec::power(1.0), constant_field(4, 2.0)) == doctest::Approx(2.0));
}

TEST_CASE("modular seminorm sandwich") {
  ExponentMap m(5, 5, 2.0);
  for (int j = 0; j < 5; ++j) m.set(j % 5, j, 1.0);
  PhiSpec phi = PhiSpec::variable_exponent(m);
  for (std::uint64_t seed : {3u, 4u, 5u}) {
    GridField v = random_field(5, 2, seed);
    const double sn = modular_seminorm(phi, v);
    const double av = anisotropic_variation(phi, v).value;
    CHECK(sn <= av * (1.0 + 1e-8));
    CHECK(av <= 2.0 * sn * (1.0 + 1e-8));
  }
  // p = 2 with sqrt(2) ||v||_2 = 1 must land inside the sandwich window.
  GridField v = random_field(4, 2, 6);
  v *= 1.0 / (std::sqrt(2.0) * norm2(v));
  const double sn = modular_seminorm(PhiSpec::power(2.0), v);
  CHECK(sn >= 0.5 - 1e-9);
  CHECK(sn <= 1.0 + 1e-9);
  CHECK(modular_seminorm(PhiSpec::power(2.0), constant_field(4, 0.0, 2)) == 0.0);
}

TEST_CASE("holder pairing bound") {
  PhiSpec phi = PhiSpec::power(2.0);
  for (std::uint64_t seed : {71u, 72u, 73u}) {
    GridField v = random_field(6, 2, seed);
    GridField psi = random_field(6, 2, seed + 100);
    const double pairing = inner(psi, v);
    const double bound = anisotropic_variation(phi, v).value * luxemburg_norm(phi.conjugate(), psi);
    CHECK(pairing <= bound * (1.0 + 1e-9));
  }
}

TEST_CASE("oracle guard rails") {
  CHECK_THROWS_AS((void)oracle_variation(PhiSpec::power(2.0), GridField(17, 4, 2), 10), InputError);
  CHECK(oracle_variation(PhiSpec::power(2.0), constant_field(4, 0.0, 2), 10) == 0.0);
}
