#pragma once

// Core vocabulary for the cuboid spectral toolkit: axis-aligned boxes of unit
// measure, boundary conditions, semiclassical constants, and the remainder
// exponent table used by the asymptotic fits.

#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace cuboidspec {

// Thrown on malformed arguments (bad dimensions, non-positive sides, ...).
class invalid_input : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when a computation would exceed a count/memory/time budget.
class resource_limit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when a numeric routine cannot reach its accuracy target.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class BoundaryCondition { dirichlet, neumann };

std::string to_string(BoundaryCondition bc);
BoundaryCondition boundary_condition_from_string(const std::string& s);

// An axis-aligned cuboid (0,a_1) x ... x (0,a_n).  Sides are kept sorted in
// non-decreasing order; they need not multiply to 1 (scaled copies are legal),
// but most of the toolkit works with unit-measure cuboids built through
// make_unit_cuboid.
class Cuboid {
 public:
  explicit Cuboid(std::vector<double> sides);

  static Cuboid cube(int dim);

  int dim() const { return static_cast<int>(sides_.size()); }
  const std::vector<double>& sides() const { return sides_; }
  double side(int i) const { return sides_.at(static_cast<std::size_t>(i)); }
  double shortest() const { return sides_.front(); }
  double longest() const { return sides_.back(); }

  double measure() const;
  bool is_unit_measure(double tol = 1e-12) const;

  bool operator==(const Cuboid& other) const { return sides_ == other.sides_; }

 private:
  std::vector<double> sides_;  // sorted ascending, all > 0
};

// Normalises raw positive sides to product exactly 1 (within 1e-12), sorted
// ascending.  Idempotent, and invariant under uniform scaling of the input.
Cuboid make_unit_cuboid(const std::vector<double>& raw_sides);

// Scaled copy t*R (helper for scaling-law checks).
Cuboid scaled(const Cuboid& r, double t);

// Seeded random unit-measure cuboid with all normalised sides inside
// [lo, hi] (rejection sampling; deterministic for a given generator state).
Cuboid random_unit_cuboid(std::mt19937_64& rng, int dim, double lo = 1.0 / 3.0,
                          double hi = 3.0);

// Surface measure |dR| = 2 sum_i prod_{j != i} a_j; the cube minimises it
// among unit-measure cuboids (value 2n).
double perimeter(const Cuboid& r);

// L_{gamma,m} = Gamma(gamma+1) / ((4 pi)^{m/2} Gamma(gamma + m/2 + 1)).
// m may be negative; requires gamma >= 0 and gamma + m/2 + 1 > 0.
double semiclassical_constant(double gamma, int m);

// omega_n = pi^{n/2} / Gamma(n/2 + 1), volume of the n-dimensional unit ball.
double unit_ball_volume(int n);

// Exponents governing the lattice remainder: theta_2 = 46/73, theta_3 = 3/2,
// theta_4 = 12/5, theta_n = n-2 for n >= 5.  User overrides must stay inside
// [n-2, n-1).  The n=2 default is open-ended above (46/73 + eps).
class ThetaTable {
 public:
  static double default_theta(int n);

  double theta(int n) const;
  void set(int n, double theta);
  const std::map<int, double>& overrides() const { return overrides_; }

 private:
  std::map<int, double> overrides_;
};

// Constants (c1, c2, b0) entering the two-term counting bounds for dimension
// `dim`.  Neumann uses only c1; c2 and b0 are fixed at neutral values there.
struct BoundConstants {
  int dim = 0;
  BoundaryCondition bc = BoundaryCondition::dirichlet;
  double c1 = 0.0;
  double c2 = 0.0;
  double b0 = 1.0;
};

// Compensated (Kahan) accumulator; used everywhere a float reduction feeds a
// deterministic output.
class KahanSum {
 public:
  void add(double x) {
    double y = x - carry_;
    double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace cuboidspec
