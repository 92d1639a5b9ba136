#pragma once

// Lattice-point counting and enumeration inside axis-aligned ellipsoids
//
//     E(R, t) = { x : sum_j x_j^2 / a_j^2 <= t^2 },
//
// restricted to the full integer lattice, the positive orthant (Dirichlet
// spectra) or the non-negative orthant (Neumann spectra).  Counting is exact
// integer arithmetic; the only float decision is the boundary predicate,
// which is made once per point in a fixed axis order.

#include <cstdint>
#include <map>
#include <vector>

#include "cuboid_spectra/core.hpp"

namespace cuboidspec::lattice {

enum class Quadrant { full, positive, nonnegative };

std::string to_string(Quadrant q);
Quadrant quadrant_from_string(const std::string& s);

struct EllipsoidQuery {
  Cuboid cuboid;
  double t = 0.0;        // reduced radius, >= 0
  Quadrant quadrant = Quadrant::positive;
};

// Sorted multiset of reduced values q = sum_j i_j^2 / a_j^2 of the admitted
// lattice points (duplicates preserved).
using ValueMultiset = std::vector<double>;

// Exact number of admitted lattice points.  Throws resource_limit if the
// volume estimate exceeds the 2^62 counter guard.
std::uint64_t count_points(const EllipsoidQuery& query);

// Reduced values of all admitted points, sorted ascending.  Throws
// resource_limit if the estimated output size exceeds max_values.
ValueMultiset enumerate_values(const EllipsoidQuery& query,
                               std::uint64_t max_values = 100'000'000);

// As enumerate_values, but replaces `out` without sorting (selection callers
// pair this with nth_element and avoid the sort).
void enumerate_unsorted_into(const EllipsoidQuery& query, ValueMultiset& out,
                             std::uint64_t max_values = 100'000'000);

// Rough traversal-node estimate for the recursive counter (cost guard for
// callers evaluating many thin cuboids).
double estimated_traversal(const EllipsoidQuery& query);

// Inclusion-exclusion consistency record: the full-lattice count against its
// reconstruction from 2^n positive-orthant copies and lower-dimensional
// coordinate sections.
struct DecompositionReport {
  std::uint64_t full_count = 0;
  std::uint64_t reconstructed = 0;
  bool consistent = false;
  // facet_counts[k] = total count of the k-codimension sections entering the
  // alternating sum (k = number of coordinates pinned to zero).
  std::map<int, std::uint64_t> facet_counts;
};

DecompositionReport symmetric_decomposition_check(const Cuboid& cuboid, double t);

// Conservative estimate of the admitted-point count (used for guards).
double estimated_count(const EllipsoidQuery& query);

}  // namespace cuboidspec::lattice
