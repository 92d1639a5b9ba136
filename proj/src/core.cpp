#include "cuboid_spectra/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cuboidspec {

std::string to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::dirichlet ? "dirichlet" : "neumann";
}

BoundaryCondition boundary_condition_from_string(const std::string& s) {
  if (s == "dirichlet" || s == "D" || s == "d") return BoundaryCondition::dirichlet;
  if (s == "neumann" || s == "N" || s == "n") return BoundaryCondition::neumann;
  throw invalid_input("unknown boundary condition: " + s);
}

Cuboid::Cuboid(std::vector<double> sides) : sides_(std::move(sides)) {
  if (sides_.empty()) throw invalid_input("cuboid needs at least one side");
  for (double a : sides_) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw invalid_input("cuboid sides must be positive and finite");
    }
  }
  std::stable_sort(sides_.begin(), sides_.end());
}

Cuboid Cuboid::cube(int dim) {
  if (dim < 1) throw invalid_input("cube dimension must be >= 1");
  return Cuboid(std::vector<double>(static_cast<std::size_t>(dim), 1.0));
}

double Cuboid::measure() const {
  double p = 1.0;
  for (double a : sides_) p *= a;
  return p;
}

bool Cuboid::is_unit_measure(double tol) const {
  return std::abs(measure() - 1.0) <= tol;
}

Cuboid make_unit_cuboid(const std::vector<double>& raw_sides) {
  if (raw_sides.empty()) throw invalid_input("make_unit_cuboid: empty side list");
  std::vector<double> s = raw_sides;
  for (double a : s) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw invalid_input("make_unit_cuboid: sides must be positive and finite");
    }
  }
  // Normalise in log space (scale-invariant), then polish multiplicatively so
  // the product lands within 1e-12 of 1.
  const std::size_t n = s.size();
  double mean_log = 0.0;
  for (double a : s) mean_log += std::log(a);
  mean_log /= static_cast<double>(n);
  for (double& a : s) a = std::exp(std::log(a) - mean_log);
  for (int pass = 0; pass < 2; ++pass) {
    double p = 1.0;
    for (double a : s) p *= a;
    double corr = std::pow(p, -1.0 / static_cast<double>(n));
    for (double& a : s) a *= corr;
  }
  Cuboid r{std::move(s)};
  if (!r.is_unit_measure(1e-12)) {
    throw numeric_error("make_unit_cuboid: normalisation failed to reach unit measure");
  }
  return r;
}

Cuboid scaled(const Cuboid& r, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw invalid_input("scaled: factor must be positive");
  std::vector<double> s = r.sides();
  for (double& a : s) a *= t;
  return Cuboid{std::move(s)};
}

Cuboid random_unit_cuboid(std::mt19937_64& rng, int dim, double lo, double hi) {
  if (dim < 1) throw invalid_input("random_unit_cuboid: dimension must be >= 1");
  if (!(0.0 < lo) || !(lo < hi)) throw invalid_input("random_unit_cuboid: need 0 < lo < hi");
  std::uniform_real_distribution<double> side(lo, hi);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<double> s(static_cast<std::size_t>(dim));
    for (double& a : s) a = side(rng);
    Cuboid r = make_unit_cuboid(s);
    if (r.shortest() >= lo - 1e-12 && r.longest() <= hi + 1e-12) return r;
  }
  throw numeric_error("random_unit_cuboid: rejection sampling failed");
}

double perimeter(const Cuboid& r) {
  double p = 0.0;
  for (int i = 0; i < r.dim(); ++i) {
    double facet = 1.0;
    for (int j = 0; j < r.dim(); ++j) {
      if (j != i) facet *= r.side(j);
    }
    p += facet;
  }
  return 2.0 * p;
}

double semiclassical_constant(double gamma, int m) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw invalid_input("semiclassical_constant: gamma must be >= 0");
  }
  const double shifted = gamma + 0.5 * m + 1.0;
  if (!(shifted > 0.0)) {
    throw invalid_input("semiclassical_constant: gamma + m/2 + 1 must be positive");
  }
  const double log_val = std::lgamma(gamma + 1.0) -
                         0.5 * m * std::log(4.0 * M_PI) -
                         std::lgamma(shifted);
  return std::exp(log_val);
}

double unit_ball_volume(int n) {
  if (n < 0) throw invalid_input("unit_ball_volume: dimension must be >= 0");
  return std::exp(0.5 * n * std::log(M_PI) - std::lgamma(0.5 * n + 1.0));
}

double ThetaTable::default_theta(int n) {
  if (n < 2) throw invalid_input("theta exponent defined for dimensions >= 2");
  switch (n) {
    case 2: return 46.0 / 73.0;
    case 3: return 1.5;
    case 4: return 2.4;
    default: return static_cast<double>(n - 2);
  }
}

double ThetaTable::theta(int n) const {
  auto it = overrides_.find(n);
  if (it != overrides_.end()) return it->second;
  return default_theta(n);
}

void ThetaTable::set(int n, double theta) {
  if (n < 2) throw invalid_input("theta exponent defined for dimensions >= 2");
  const double lo = static_cast<double>(n - 2);
  const double hi = static_cast<double>(n - 1);
  if (!(theta >= lo) || !(theta < hi)) {
    throw invalid_input("theta override must lie in [n-2, n-1)");
  }
  overrides_[n] = theta;
}

}  // namespace cuboidspec
