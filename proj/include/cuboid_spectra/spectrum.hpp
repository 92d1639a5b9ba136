#pragma once

// Spectra of the Laplacian on axis-aligned cuboids.  Dirichlet eigenvalues
// are pi^2 sum_j i_j^2/a_j^2 over positive integer indices, Neumann over
// non-negative indices (so mu_0 = 0).  Everything routes through the lattice
// module: eigenvalue k is the k-th order statistic of the admitted reduced
// values, counting functions are inclusive lattice counts.

#include <cstdint>
#include <vector>

#include "cuboid_spectra/core.hpp"
#include "cuboid_spectra/lattice.hpp"

namespace cuboidspec::spectrum {

struct RieszSpec {
  double gamma = 1.0;
  double threshold = 0.0;  // absolute units
  BoundaryCondition bc = BoundaryCondition::dirichlet;
};

struct SumResult {
  double sum = 0.0;      // absolute units
  double average = 0.0;  // sum / k (0 for the Neumann k = 0 case)
};

struct LegendreResult {
  double value = 0.0;   // sup_lambda (k lambda - Riesz_1(lambda))
  double argmax = 0.0;  // a maximiser; the sup is attained on [lambda_k, lambda_{k+1}]
};

lattice::Quadrant quadrant_for(BoundaryCondition bc);

// k-th Dirichlet eigenvalue (k >= 1) or k-th Neumann eigenvalue (k >= 0,
// mu_0 = 0).  Absolute units.
double eigenvalue(const Cuboid& r, BoundaryCondition bc, std::int64_t k);

// Number of eigenvalues <= lambda (inclusive, within the boundary guard).
std::uint64_t counting_function(const Cuboid& r, BoundaryCondition bc, double lambda);

// Riesz mean sum (threshold - lambda_i)_+^gamma; gamma = 0 degenerates to the
// counting function.
double riesz_mean(const Cuboid& r, const RieszSpec& spec);

// Sum and average of the lowest k eigenvalues (Neumann sums include mu_0
// through mu_k, i.e. k+1 terms; k = 0 yields 0/0 -> {0, 0} by convention).
SumResult eigenvalue_sum(const Cuboid& r, BoundaryCondition bc, std::int64_t k);

// Lifts Riesz_{gamma1} to Riesz_{gamma2} (gamma2 > gamma1) at threshold eta
// via the Beta-normalised convolution identity, quadrature-based; agrees with
// riesz_mean to ~1e-8 relative.
double aizenman_lieb_lift(const Cuboid& r, BoundaryCondition bc, double gamma1,
                          double gamma2, double eta);

// Dirichlet sum of the lowest k eigenvalues evaluated through the Legendre
// transform sup_lambda (k lambda - Riesz_1(lambda)).
LegendreResult legendre_sum(const Cuboid& r, std::int64_t k);

// The `count` lowest reduced values (lambda/pi^2) in ascending order.
// Internal building block, exposed for the optimiser and tests.
std::vector<double> lowest_reduced_values(const Cuboid& r, BoundaryCondition bc,
                                          std::uint64_t count);

// k_rank-th smallest reduced value (1-based), scratch-buffer fast path.
double kth_reduced_value(const Cuboid& r, BoundaryCondition bc, std::uint64_t k_rank);

}  // namespace cuboidspec::spectrum
