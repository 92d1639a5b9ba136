#pragma once

// Two-term spectral evaluations and power-law fitting.
//
// Two-term shapes on a cuboid R with volume |R| and surface measure |dR|:
//   counting:   L_{0,n} |R| lambda^{n/2} -+ (L_{0,n-1}/4) |dR| lambda^{(n-1)/2}
//               (minus for Dirichlet, plus for Neumann)
//   eigenvalue: 4 pi Gamma(n/2+1)^{2/n} k^{2/n}
//               +- (2 pi Gamma(n/2+1)^{1+1/n} / (n Gamma((n+1)/2))) |dR| k^{1/n}
//               (plus for Dirichlet, minus for Neumann; unit measure)
//
// Remainder exponents are estimated by an upper-envelope fit: group the
// samples into dyadic blocks, take the largest |remainder| per block, and
// run least squares on log(max) against log(t) or log(lambda).  Pointwise
// remainders oscillate through zero, so pointwise fitting would be
// meaningless for a sup-type exponent.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cuboid_spectra/core.hpp"

namespace cuboidspec::asymptotics {

enum class RemainderMode { full_lattice, counting_dirichlet, counting_neumann };

std::string to_string(RemainderMode mode);
RemainderMode remainder_mode_from_string(const std::string& s);

struct FitReport {
  std::string series_id;
  std::size_t sample_count = 0;
  double fitted_exponent = 0.0;
  double fitted_constant = 0.0;  // multiplier in front of the power law
  double r_squared = 0.0;
  double reference_exponent = 0.0;
  std::string window;
  bool degenerate = false;       // every ordinate was zero
  std::size_t zeros_dropped = 0;
  std::string note;
};

// Two-term counting value at the threshold (any positive-measure cuboid).
double two_term_counting(const Cuboid& r, BoundaryCondition bc, double threshold);

// Two-term k-th eigenvalue prediction; requires unit measure.
double two_term_eigenvalue(const Cuboid& r, BoundaryCondition bc, std::int64_t k);

// Upper-envelope fit of the lattice or counting remainder over t_grid.
//   full_lattice:        |count(full, t) - omega_n t^n |R||, fitted against t
//   counting_dirichlet:  |N^D(lambda) - two_term|, lambda = pi^2 t^2,
//                        fitted against lambda (reference theta_n / 2)
//   counting_neumann:    likewise for N^N
// Requires at least 3 dyadic blocks; reports flag fits with fewer than 8.
FitReport fit_remainder_exponent(const Cuboid& r, RemainderMode mode,
                                 const std::vector<double>& t_grid,
                                 const ThetaTable& thetas = ThetaTable());

enum class SeriesKind { delta, stability };

std::string to_string(SeriesKind kind);

// Log-log fit of a convergence series (k, y_k >= 0) over the upper part of
// the k-window.  Zero ordinates are dropped and counted; an all-zero window
// yields a degenerate report instead of an error.  Reference exponents:
// (theta_n - (n-1)) / (2n) for delta series, (theta_n - (n-2)) / n for
// stability series.
FitReport fit_convergence_rate(const std::vector<std::pair<double, double>>& series,
                               SeriesKind kind, int dim,
                               const ThetaTable& thetas = ThetaTable(),
                               double window_fraction = 0.5);

// Log-spaced sampling grid covering [t_min, t_max] with roughly
// points_per_block samples in each dyadic block.
std::vector<double> dyadic_grid(double t_min, double t_max, int points_per_block);

}  // namespace cuboidspec::asymptotics
