#pragma once

// Spectral bounds for unit-measure cuboids, and a verification driver that
// sweeps them over seeded grids.
//
// Shapes implemented (reduced one-dimensional pieces are in plain units
// where the interval (0,1) has eigenvalues k^2):
//   * Dirichlet counting, three terms:
//       N(lambda) <= L_{0,n} lambda^{n/2}
//                    - c1 b L_{0,n-1} / a_1 lambda^{(n-1)/2}
//                    + c2 b^2 L_{0,n-2} / a_1^2 lambda^{(n-2)/2}
//   * Neumann counting, two terms with the + sign and no tuning parameter.
//   * Riesz means of order gamma >= 0: same shapes with L_{gamma,m} and
//     thresholds raised by gamma.
//   * Averages of Dirichlet eigenvalues: Legendre step at
//     lambda* = 4 pi Gamma(n/2+1)^{2/n} k^{2/n}.
//
// Constants: for n >= 3 both families compose from the one-dimensional
// bounds through the product structure (the Beta-function factors of the
// gamma = 1 lift cancel exactly); the dimension-two constants keep the
// Weyl-term shape and a calibrated coefficient, obtained by scanning the
// binding jump points of seeded random rectangles and shrinking 10%.

#include <cstdint>
#include <string>
#include <vector>

#include "cuboid_spectra/core.hpp"
#include "cuboid_spectra/spectrum.hpp"

namespace cuboidspec::bounds {

// 4 pi Gamma(n/2+1)^{2/n} (k / measure)^{2/n}: lower bound for Dirichlet
// eigenvalues, upper bound for Neumann eigenvalues, on cuboids.
double polya_bound(int n, std::int64_t k, double measure = 1.0);

// Constants (c1, c2, b0) for dimension n; cached after first derivation.
const BoundConstants& bound_constants(int n, BoundaryCondition bc);

// Uncached derivation (composition for n >= 3, calibration for n = 2).
BoundConstants derive_bound_constants(int n, BoundaryCondition bc);

// Three-term upper bound for the Dirichlet counting function; requires a
// unit-measure cuboid and b in [0, b0].
double dirichlet_count_upper(const Cuboid& r, double lambda, double b);

// Two-term lower bound for the Neumann counting function.
double neumann_count_lower(const Cuboid& r, double mu);

// Riesz-mean bound of order gamma >= 0: upper bound for Dirichlet, lower
// bound for Neumann (b is ignored for Neumann).
double riesz_bound(const Cuboid& r, const spectrum::RieszSpec& spec, double b = 0.0);

// Lower bound for the average of the first k Dirichlet eigenvalues.
double average_lower_bound(const Cuboid& r, std::int64_t k, double b);

// Explicit-constants variants (the verification driver uses these to run
// negative controls with scaled coefficients).
double dirichlet_count_upper(const Cuboid& r, double lambda, double b,
                             const BoundConstants& c);
double neumann_count_lower(const Cuboid& r, double mu, const BoundConstants& c);
double riesz_bound(const Cuboid& r, const spectrum::RieszSpec& spec, double b,
                   const BoundConstants& c);
double average_lower_bound(const Cuboid& r, std::int64_t k, double b,
                           const BoundConstants& c);

// Exact one-dimensional first Riesz means, reduced units:
//   Dirichlet: sum_{j>=1} (lambda - j^2)_+, Neumann: sum_{j>=0} (mu - j^2)_+.
double oned_riesz1_exact(BoundaryCondition bc, double lambda);

// Extremal-in-r polynomial envelopes of the exact means (upper for
// Dirichlet, lower for Neumann).
double oned_dirichlet_envelope(double lambda);
double oned_neumann_envelope(double mu);

struct VerifySpec {
  std::string suite;
  std::vector<int> dims{};       // empty -> suite default
  int cuboids = 0;               // 0 -> suite default
  std::uint64_t seed = 0xC0FFEE;
  double threshold_max = 0.0;    // absolute units; 0 -> suite default
  std::int64_t k_max = 0;        // 0 -> suite default
  int grid_points = 48;
  int random_points = 10000;     // appendix suites
  double slack = 1e-9;
  double constant_scale = 1.0;   // scales the sharp constant (negative controls)
  std::vector<double> gammas{};  // riesz suites; empty -> {0.5, 1, 1.5, 2}
  std::vector<double> b_fractions{};  // of b0; empty -> {0, 0.5, 1}
};

struct Violation {
  int dim = 1;
  std::vector<double> sides;
  std::string check;      // which inequality inside the suite
  double parameter = 0;   // lambda, mu or k
  double gamma = 0;
  double b = 0;
  double lhs = 0;
  double rhs = 0;
  double margin = 0;      // normalised amount by which the claim failed
};

struct BoundReport {
  std::string bound_id;
  std::uint64_t seed = 0;
  std::string grid;             // human-readable grid description
  std::uint64_t checks = 0;
  std::vector<Violation> violations;
  double max_slack_used = 0.0;  // largest normalised non-negative gap observed
};

// Valid suite ids: polya-D, polya-N, lemma21, lemma22, lemma54, lemma55,
// lemma56, appendixA1, appendixA2.
const std::vector<std::string>& verify_suites();

BoundReport verify_bound(const VerifySpec& spec);

}  // namespace cuboidspec::bounds
