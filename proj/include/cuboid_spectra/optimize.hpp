#pragma once

// Shape optimisation over unit-measure cuboids.
//
// Targets and directions:
//   lambda_k  minimise the k-th Dirichlet eigenvalue
//   mu_k      maximise the k-th Neumann eigenvalue
//   riesz     maximise the Dirichlet Riesz mean / minimise the Neumann one
//             at a fixed threshold
//   average   minimise the mean of the first k Dirichlet eigenvalues
//             (the Neumann variant maximises and is marked exploratory)
//
// The feasible set {sorted sides, product 1} is parametrised by
// v in R^{n-1} through side logs with a zero-sum extension, so every decoded
// point has unit measure by construction.  An optional sub-collection
// constraint a_2 = ratio * a_1 on the sorted sides (n >= 3, ratio >= 1)
// drops one parameter instead and restricts the remaining sides to be
// >= a_2; its smallest-perimeter member (ratio^{-(n-1)/n}, ratio^{1/n}, ...)
// replaces the cube as the deterministic anchor start.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cuboid_spectra/core.hpp"

namespace cuboidspec::optimize {

enum class Target { lambda_k, mu_k, riesz, average };

std::string to_string(Target target);
Target target_from_string(const std::string& s);

struct Options {
  int starts = 8;                    // local searches, the anchor always included
  std::int64_t budget_per_start = 2000;
  double value_tolerance = 1e-9;     // relative stagnation tolerance
  std::uint64_t seed = 0xC0FFEE;
  double ratio_constraint = 0.0;     // > 0 imposes a_2 = ratio * a_1 (n >= 3)
  std::vector<Cuboid> warm_starts;   // extra initial points
  double traversal_limit = 5e6;      // lattice-cost guard per evaluation
};

struct OptimizationResult {
  Target target = Target::lambda_k;
  BoundaryCondition bc = BoundaryCondition::dirichlet;
  std::int64_t k = 0;          // eigenvalue / average targets
  double gamma = 0.0;          // riesz target
  double threshold = 0.0;      // riesz target
  Cuboid optimal_cuboid = Cuboid::cube(1);
  double optimal_value = 0.0;
  double value_at_cube = 0.0;  // unconstrained unit cube, always feasible
  double delta = 0.0;          // a_n* - 1 (>= 0 for unit measure, sorted sides)
  double perimeter_defect = 0.0;  // |dR*| - 2n (>= 0, isoperimetry)
  std::int64_t evaluations = 0;
  double multistart_spread = 0.0;  // value gap among local optima found
  bool budget_exhausted = false;   // some start stopped on budget, not stagnation
  bool flat_objective = false;     // riesz objective vanished at every optimum probe
  bool exploratory = false;        // Neumann averages
};

OptimizationResult optimize_eigenvalue(int n, BoundaryCondition bc, std::int64_t k,
                                       const Options& opts = {});

OptimizationResult optimize_riesz(int n, BoundaryCondition bc, double gamma,
                                  double threshold, const Options& opts = {});

OptimizationResult optimize_average(int n, std::int64_t k, const Options& opts = {},
                                    BoundaryCondition bc = BoundaryCondition::dirichlet);

// Batch sweep over k (eigenvalue / average targets) or over thresholds
// (riesz target).  Each grid point warm-starts from the previous optimum and
// always keeps a cube start; results stream through the callback in grid
// order.  resume_from_k skips grid points below it after a checkpoint.
struct SweepSpec {
  Target target = Target::lambda_k;
  BoundaryCondition bc = BoundaryCondition::dirichlet;
  int dim = 2;
  std::int64_t k_min = 1;
  std::int64_t k_max = 1;
  std::int64_t k_step = 1;
  double gamma = 1.0;              // riesz sweeps
  std::vector<double> thresholds;  // riesz sweeps iterate these instead of k
  std::int64_t resume_from_k = 0;
  std::vector<double> resume_warm;  // sides of the checkpointed optimum
  Options options{.starts = 4};     // warm-started sweeps need fewer cold starts
};

using SweepCallback = std::function<void(const OptimizationResult&)>;

std::vector<OptimizationResult> sweep(const SweepSpec& spec,
                                      const SweepCallback& on_result = {});

}  // namespace cuboidspec::optimize
