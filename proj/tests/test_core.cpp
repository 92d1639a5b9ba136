#include <cmath>
#include <random>

#include "cuboid_spectra/core.hpp"
#include "doctest.h"

using namespace cuboidspec;

namespace {
constexpr double kPi = M_PI;
}

TEST_CASE("make_unit_cuboid normalises, sorts and validates") {
  const Cuboid r = make_unit_cuboid({2.0, 0.5});
  CHECK(r.dim() == 2);
  CHECK(r.side(0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.side(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r.is_unit_measure());

  const Cuboid s = make_unit_cuboid({1.0, 2.0, 4.0});
  CHECK(s.side(0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s.side(1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.side(2) == doctest::Approx(2.0).epsilon(1e-14));

  CHECK_THROWS_AS(make_unit_cuboid({}), invalid_input);
  CHECK_THROWS_AS(make_unit_cuboid({1.0, 0.0}), invalid_input);
  CHECK_THROWS_AS(make_unit_cuboid({-1.0, 2.0}), invalid_input);
  CHECK_THROWS_AS(make_unit_cuboid({1.0, std::nan("")}), invalid_input);
}

TEST_CASE("make_unit_cuboid is idempotent and scale invariant") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> side(0.1, 10.0);
  std::uniform_real_distribution<double> scale(1e-3, 1e3);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    std::vector<double> raw(static_cast<std::size_t>(n));
    for (double& a : raw) a = side(rng);
    const Cuboid r = make_unit_cuboid(raw);
    CHECK(std::abs(r.measure() - 1.0) <= 1e-12);

    const Cuboid again = make_unit_cuboid(r.sides());
    std::vector<double> scaled_raw = raw;
    const double c = scale(rng);
    for (double& a : scaled_raw) a *= c;
    const Cuboid rescaled = make_unit_cuboid(scaled_raw);
    for (int i = 0; i < n; ++i) {
      CHECK(again.side(i) == doctest::Approx(r.side(i)).epsilon(1e-12));
      CHECK(rescaled.side(i) == doctest::Approx(r.side(i)).epsilon(1e-12));
    }
  }
}

TEST_CASE("cuboid constructor and helpers") {
  CHECK_THROWS_AS(Cuboid({}), invalid_input);
  CHECK_THROWS_AS(Cuboid({1.0, -2.0}), invalid_input);

  const Cuboid q = Cuboid::cube(3);
  CHECK(q.measure() == doctest::Approx(1.0));
  CHECK(perimeter(q) == doctest::Approx(6.0));
  CHECK(perimeter(Cuboid::cube(2)) == doctest::Approx(4.0));
  CHECK(perimeter(make_unit_cuboid({0.5, 2.0})) == doctest::Approx(5.0));
  CHECK(perimeter(Cuboid({0.5, 2.0, 3.0})) == doctest::Approx(2.0 * (6.0 + 1.5 + 1.0)));

  const Cuboid sc = scaled(q, 2.0);
  CHECK(sc.measure() == doctest::Approx(8.0));
  CHECK_THROWS_AS(scaled(q, 0.0), invalid_input);
}

TEST_CASE("random unit cuboids respect the side box") {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const Cuboid r = random_unit_cuboid(rng, n);
    CHECK(r.is_unit_measure());
    CHECK(r.shortest() >= 1.0 / 3.0 - 1e-12);
    CHECK(r.longest() <= 3.0 + 1e-12);
  }
}

TEST_CASE("semiclassical constants match closed forms") {
  CHECK(semiclassical_constant(0.0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(semiclassical_constant(0.0, 1) == doctest::Approx(1.0 / kPi).epsilon(1e-14));
  CHECK(semiclassical_constant(0.0, 2) == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-14));
  CHECK(semiclassical_constant(1.0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(semiclassical_constant(1.0, 1) == doctest::Approx(2.0 / (3.0 * kPi)).epsilon(1e-14));
  CHECK(semiclassical_constant(1.0, 2) == doctest::Approx(1.0 / (8.0 * kPi)).epsilon(1e-14));
  CHECK(semiclassical_constant(1.0, -1) == doctest::Approx(4.0).epsilon(1e-14));

  CHECK_THROWS_AS(semiclassical_constant(-0.5, 2), invalid_input);
  CHECK_THROWS_AS(semiclassical_constant(0.0, -2), invalid_input);
}

TEST_CASE("unit ball volumes") {
  CHECK(unit_ball_volume(0) == doctest::Approx(1.0));
  CHECK(unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(unit_ball_volume(2) == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-14));
  CHECK(unit_ball_volume(4) == doctest::Approx(kPi * kPi / 2.0).epsilon(1e-14));
  CHECK_THROWS_AS(unit_ball_volume(-1), invalid_input);
}

TEST_CASE("semiclassical identities") {
  for (int n = 1; n <= 10; ++n) {
    const double lhs = 4.0 * kPi * kPi * std::pow(unit_ball_volume(n), -2.0 / n);
    const double rhs =
        4.0 * kPi * std::pow(std::exp(std::lgamma(0.5 * n + 1.0)), 2.0 / n);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
  // One-dimensional reduction composes: L_{0,n} = L_{0,n-1} L_{(n-1)/2,1}.
  for (int n = 2; n <= 10; ++n) {
    const double composed = semiclassical_constant(0.0, n - 1) *
                            semiclassical_constant(0.5 * (n - 1), 1);
    CHECK(semiclassical_constant(0.0, n) == doctest::Approx(composed).epsilon(1e-13));
  }
}

TEST_CASE("theta exponent table") {
  ThetaTable table;
  CHECK(table.theta(2) == doctest::Approx(46.0 / 73.0).epsilon(1e-15));
  CHECK(table.theta(3) == doctest::Approx(1.5));
  CHECK(table.theta(4) == doctest::Approx(2.4));
  CHECK(table.theta(5) == doctest::Approx(3.0));
  CHECK(table.theta(9) == doctest::Approx(7.0));
  CHECK_THROWS_AS(table.theta(1), invalid_input);

  table.set(2, 0.64);
  CHECK(table.theta(2) == doctest::Approx(0.64));
  CHECK_THROWS_AS(table.set(2, 1.0), invalid_input);
  CHECK_THROWS_AS(table.set(3, 0.9), invalid_input);
  CHECK_THROWS_AS(table.set(1, 0.5), invalid_input);
}

TEST_CASE("boundary condition names round trip") {
  CHECK(boundary_condition_from_string("dirichlet") == BoundaryCondition::dirichlet);
  CHECK(boundary_condition_from_string("N") == BoundaryCondition::neumann);
  CHECK(to_string(BoundaryCondition::neumann) == "neumann");
  CHECK_THROWS_AS(boundary_condition_from_string("robin"), invalid_input);
}

TEST_CASE("kahan accumulator compensates") {
  KahanSum acc;
  for (int i = 0; i < 1000000; ++i) acc.add(0.1);
  CHECK(acc.value() == doctest::Approx(100000.0).epsilon(1e-12));
}
