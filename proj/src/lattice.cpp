#include "cuboid_spectra/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "cuboid_spectra/parallel.hpp"

namespace cuboidspec::lattice {
namespace {

/*
 * All membership decisions go through one canonical predicate.  With sides
 * a_1 <= ... <= a_n, a point (i_1, ..., i_n) is admitted when
 *
 *     q = sum_{j = n..1} i_j^2 / a_j^2   (accumulated in descending axis order)
 *
 * satisfies q <= T, where T = t^2 (1 + 4 eps) absorbs rounding noise on the
 * boundary.  The same accumulation order is used by counting, enumeration and
 * the decomposition sections, so every point is classified identically
 * everywhere.  Accumulating non-negative terms is monotone in floating point,
 * which makes prefix pruning safe: once a partial sum exceeds T no completion
 * can be admitted.
 */

struct Ctx {
  int n = 0;
  const double* a = nullptr;       // ascending
  const double* inv_sq = nullptr;  // 1/a_j^2, same order
  double budget = 0.0;             // T
  Quadrant quad = Quadrant::positive;
};

// Largest m >= 0 with partial + m^2/a^2 <= T; requires partial <= T.
std::int64_t max_index(const Ctx& c, int axis, double partial) {
  const double rem = c.budget - partial;
  const double inv = c.inv_sq[axis];
  auto admitted = [&](std::int64_t i) {
    const double di = static_cast<double>(i);
    return partial + di * di * inv <= c.budget;
  };
  std::int64_t m = rem > 0.0
      ? static_cast<std::int64_t>(std::floor(c.a[axis] * std::sqrt(rem)))
      : 0;
  if (m < 0) m = 0;
  while (admitted(m + 1)) ++m;
  while (m > 0 && !admitted(m)) --m;
  return m;
}

std::uint64_t count_level(const Ctx& c, int axis, double partial) {
  const std::int64_t m = max_index(c, axis, partial);
  if (axis == 0) {
    switch (c.quad) {
      case Quadrant::positive: return static_cast<std::uint64_t>(m);
      case Quadrant::nonnegative: return static_cast<std::uint64_t>(m + 1);
      case Quadrant::full: return static_cast<std::uint64_t>(2 * m + 1);
    }
  }
  const double inv = c.inv_sq[axis];
  std::uint64_t total = 0;
  if (c.quad != Quadrant::positive) total += count_level(c, axis - 1, partial);
  for (std::int64_t i = 1; i <= m; ++i) {
    const double di = static_cast<double>(i);
    const std::uint64_t sub = count_level(c, axis - 1, partial + di * di * inv);
    total += c.quad == Quadrant::full ? 2 * sub : sub;
  }
  return total;
}

// Appends each admitted value `mult` times (full-lattice symmetry weight).
void enumerate_level(const Ctx& c, int axis, double partial, std::uint64_t mult,
                     ValueMultiset& out) {
  const std::int64_t m = max_index(c, axis, partial);
  const double inv = c.inv_sq[axis];
  if (axis == 0) {
    const std::int64_t lo = c.quad == Quadrant::positive ? 1 : 0;
    for (std::int64_t i = lo; i <= m; ++i) {
      const double di = static_cast<double>(i);
      const double q = partial + di * di * inv;
      std::uint64_t copies = mult;
      if (c.quad == Quadrant::full && i > 0) copies *= 2;
      for (std::uint64_t r = 0; r < copies; ++r) out.push_back(q);
    }
    return;
  }
  if (c.quad != Quadrant::positive) enumerate_level(c, axis - 1, partial, mult, out);
  for (std::int64_t i = 1; i <= m; ++i) {
    const double di = static_cast<double>(i);
    const std::uint64_t sub_mult = c.quad == Quadrant::full ? 2 * mult : mult;
    enumerate_level(c, axis - 1, partial + di * di * inv, sub_mult, out);
  }
}

Ctx make_ctx(const std::vector<double>& sides, const std::vector<double>& inv_sq,
             double t, Quadrant quad) {
  Ctx c;
  c.n = static_cast<int>(sides.size());
  c.a = sides.data();
  c.inv_sq = inv_sq.data();
  c.budget = t * t * (1.0 + 4.0 * std::numeric_limits<double>::epsilon());
  c.quad = quad;
  return c;
}

std::vector<double> inverse_squares(const std::vector<double>& sides) {
  std::vector<double> inv(sides.size());
  for (std::size_t j = 0; j < sides.size(); ++j) inv[j] = 1.0 / (sides[j] * sides[j]);
  return inv;
}

void validate(const EllipsoidQuery& query) {
  if (!(query.t >= 0.0) || !std::isfinite(query.t)) {
    throw invalid_input("ellipsoid query: radius t must be >= 0 and finite");
  }
}

double ellipsoid_volume(const Cuboid& cuboid, double t) {
  const int n = cuboid.dim();
  double v = unit_ball_volume(n) * std::pow(t, n);
  for (double a : cuboid.sides()) v *= a;
  return v;
}

void check_counter_guard(const Cuboid& cuboid, double t) {
  const double est = ellipsoid_volume(cuboid, t);
  if (!(est < 4.611686018427387904e18)) {  // 2^62
    throw resource_limit("lattice count estimate exceeds the 2^62 counter guard");
  }
}

constexpr std::int64_t kParallelThreshold = 1 << 22;

}  // namespace

std::string to_string(Quadrant q) {
  switch (q) {
    case Quadrant::full: return "full";
    case Quadrant::positive: return "positive";
    case Quadrant::nonnegative: return "nonnegative";
  }
  return "?";
}

Quadrant quadrant_from_string(const std::string& s) {
  if (s == "full") return Quadrant::full;
  if (s == "positive") return Quadrant::positive;
  if (s == "nonnegative") return Quadrant::nonnegative;
  throw invalid_input("unknown quadrant: " + s);
}

double estimated_count(const EllipsoidQuery& query) {
  validate(query);
  const int n = query.cuboid.dim();
  const double v = ellipsoid_volume(query.cuboid, query.t);
  const double orthant = v / std::pow(2.0, n);
  switch (query.quadrant) {
    case Quadrant::full:
      return 1.05 * v + std::pow(2.0, n) + 8.0;
    case Quadrant::positive:
      return orthant + 8.0;
    case Quadrant::nonnegative: {
      // One level of boundary sections (one coordinate pinned to zero).
      double sections = 0.0;
      if (n >= 2) {
        const double v_shell = unit_ball_volume(n - 1) * std::pow(query.t, n - 1) /
                               std::pow(2.0, n - 1);
        double prod = 1.0;
        for (double a : query.cuboid.sides()) prod *= a;
        for (double a : query.cuboid.sides()) sections += v_shell * prod / a;
      } else {
        sections = 1.0;
      }
      return orthant + 1.1 * sections + n * n + 8.0;
    }
  }
  return v;
}

std::uint64_t count_points(const EllipsoidQuery& query) {
  validate(query);
  check_counter_guard(query.cuboid, query.t);
  const auto& sides = query.cuboid.sides();
  const auto inv_sq = inverse_squares(sides);
  const Ctx c = make_ctx(sides, inv_sq, query.t, query.quadrant);
  const int top = c.n - 1;
  if (top == 0) return count_level(c, 0, 0.0);

  const std::int64_t m = max_index(c, top, 0.0);
  const std::int64_t lo = c.quad == Quadrant::positive ? 1 : 0;
  const double est = estimated_count(query);
  if (par::worker_count() <= 1 || est < kParallelThreshold || m - lo < 8) {
    return count_level(c, top, 0.0);
  }
  // Per-index partial counts, summed serially: exact integers, so the result
  // does not depend on the worker count or chunking.
  std::vector<std::uint64_t> per_index(static_cast<std::size_t>(m - lo + 1), 0);
  const double inv = c.inv_sq[top];
  par::parallel_for(lo, m + 1, [&](std::int64_t a_begin, std::int64_t a_end) {
    for (std::int64_t i = a_begin; i < a_end; ++i) {
      const double di = static_cast<double>(i);
      std::uint64_t sub = count_level(c, top - 1, di * di * inv);
      if (c.quad == Quadrant::full && i > 0) sub *= 2;
      per_index[static_cast<std::size_t>(i - lo)] = sub;
    }
  });
  std::uint64_t total = 0;
  for (std::uint64_t v : per_index) total += v;
  return total;
}

void enumerate_unsorted_into(const EllipsoidQuery& query, ValueMultiset& out,
                             std::uint64_t max_values) {
  validate(query);
  check_counter_guard(query.cuboid, query.t);
  const double est = estimated_count(query);
  if (est > static_cast<double>(max_values)) {
    throw resource_limit("enumeration estimate " + std::to_string(est) +
                         " exceeds cap " + std::to_string(max_values));
  }
  const auto& sides = query.cuboid.sides();
  const auto inv_sq = inverse_squares(sides);
  const Ctx c = make_ctx(sides, inv_sq, query.t, query.quadrant);
  const int top = c.n - 1;

  out.clear();
  out.reserve(static_cast<std::size_t>(std::min(est * 1.2 + 64.0,
                                                static_cast<double>(max_values) + 64.0)));
  const std::int64_t m = top == 0 ? 0 : max_index(c, top, 0.0);
  const std::int64_t lo = c.quad == Quadrant::positive ? 1 : 0;
  if (top == 0 || par::worker_count() <= 1 || est < kParallelThreshold || m - lo < 8) {
    enumerate_level(c, top, 0.0, 1, out);
    return;
  }
  // Chunks append under a lock in arrival order; callers either sort or take
  // order statistics, both independent of the worker count.
  std::mutex merge_lock;
  const double inv = c.inv_sq[top];
  par::parallel_for(lo, m + 1, [&](std::int64_t a_begin, std::int64_t a_end) {
    ValueMultiset local;
    for (std::int64_t i = a_begin; i < a_end; ++i) {
      const double di = static_cast<double>(i);
      std::uint64_t mult = 1;
      if (c.quad == Quadrant::full && i > 0) mult = 2;
      enumerate_level(c, top - 1, di * di * inv, mult, local);
    }
    std::lock_guard<std::mutex> hold(merge_lock);
    out.insert(out.end(), local.begin(), local.end());
  });
}

ValueMultiset enumerate_values(const EllipsoidQuery& query, std::uint64_t max_values) {
  ValueMultiset out;
  enumerate_unsorted_into(query, out, max_values);
  std::sort(out.begin(), out.end());
  return out;
}

double estimated_traversal(const EllipsoidQuery& query) {
  validate(query);
  const auto& sides = query.cuboid.sides();
  const int n = static_cast<int>(sides.size());
  // Internal nodes at depth d iterate over admissible prefixes spanned by the
  // d longest sides (outermost first).
  double total = 1.0;
  double prod = 1.0;
  for (int d = 1; d <= n - 1; ++d) {
    prod *= sides[static_cast<std::size_t>(n - d)];
    const double orthant = query.quadrant == Quadrant::full ? 1.0 : std::pow(2.0, -d);
    total += unit_ball_volume(d) * std::pow(query.t, d) * prod * orthant +
             static_cast<double>(d);
  }
  return total + estimated_count(query);
}

DecompositionReport symmetric_decomposition_check(const Cuboid& cuboid, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw invalid_input("decomposition check: radius t must be >= 0 and finite");
  }
  const int n = cuboid.dim();
  if (n > 16) throw invalid_input("decomposition check supports dimensions <= 16");
  const double est = ellipsoid_volume(cuboid, t);
  if (!(est < 1e9)) {
    throw resource_limit("decomposition check needs a full enumeration; estimate too large");
  }

  DecompositionReport report;
  report.full_count = count_points({cuboid, t, Quadrant::full});

  const std::uint64_t positive = count_points({cuboid, t, Quadrant::positive});
  std::int64_t reconstructed =
      static_cast<std::int64_t>(positive) * (std::int64_t{1} << n);

  // Alternating sum over the coordinate sections: subsets I of axes pinned to
  // zero, the remaining axes keeping the full lattice.
  const auto& sides = cuboid.sides();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<double> sub;
    for (int j = 0; j < n; ++j) {
      if (!(mask & (1u << j))) sub.push_back(sides[static_cast<std::size_t>(j)]);
    }
    const int pinned = n - static_cast<int>(sub.size());
    std::uint64_t section_count;
    if (sub.empty()) {
      section_count = 1;  // the origin, admitted for every t >= 0
    } else {
      section_count = count_points({Cuboid{sub}, t, Quadrant::full});
    }
    report.facet_counts[pinned] += section_count;
    const std::int64_t sign = (pinned % 2 == 1) ? 1 : -1;
    reconstructed += sign * static_cast<std::int64_t>(section_count);
  }
  report.reconstructed = static_cast<std::uint64_t>(reconstructed);
  report.consistent = report.full_count == report.reconstructed;
  return report;
}

}  // namespace cuboidspec::lattice
