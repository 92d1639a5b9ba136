#include "cuboid_spectra/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "cuboid_spectra/lattice.hpp"

namespace cuboidspec::bounds {
namespace {

constexpr double kPi = M_PI;
constexpr double kPiSq = M_PI * M_PI;

// Seeds of the one-dimensional bounds (reduced units).  The Dirichlet family
// is S(lambda) <= (2/3) sqrt(lambda) (sqrt(lambda) - b)^2 for b in [0, b0];
// the Neumann bound S(mu) >= (2/3) mu^{3/2} + c1 mu is derived through the
// polynomial envelope, which is tight exactly at the stated c1.
const double kDirichletSeedC1 = 4.0 / 3.0;
const double kDirichletSeedC2 = kPi / 6.0;
const double kSeedB0 = 1.0 - std::sqrt((27.0 + std::sqrt(3.0)) / 2.0) / 6.0;
const double kNeumannSeedC1 = (36.0 - std::sqrt(3.0)) / 108.0;

double log_beta(double x, double y) {
  return std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y);
}

double beta_fn(double x, double y) { return std::exp(log_beta(x, y)); }

void require_unit_measure(const Cuboid& r) {
  if (!r.is_unit_measure(1e-9)) {
    throw invalid_input("bound requires a unit-measure cuboid");
  }
}

void require_dim(const Cuboid& r) {
  if (r.dim() < 2) throw invalid_input("bound requires dimension >= 2");
}

void require_threshold(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw invalid_input("bound threshold must be >= 0 and finite");
  }
}

void require_b(const BoundConstants& c, double b) {
  if (!(b >= 0.0) || b > c.b0 * (1.0 + 1e-12)) {
    throw invalid_input("tuning parameter b must lie in [0, b0]");
  }
}

// ---------------------------------------------------------------------------
// Dimension-two calibration.  Between jumps the counting function is constant
// while both bound sides are monotone, so checking all jump points of a
// cuboid is equivalent to checking a dense threshold grid.

// Largest b such that N(lambda) <= (1/(4 pi)) (sqrt(lambda) - b/a_1)^2 holds
// for this rectangle on all thresholds up to q_max (reduced).
double dirichlet_b_limit(const Cuboid& r, double q_max) {
  const auto values = lattice::enumerate_values(
      {r, std::sqrt(q_max), lattice::Quadrant::positive});
  const double a1 = r.shortest();
  double limit = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i + 1 < values.size() && values[i + 1] <= values[i]) continue;
    const double lambda = kPiSq * values[i];
    const double count = static_cast<double>(i + 1);
    const double candidate = a1 * (std::sqrt(lambda) - std::sqrt(4.0 * kPi * count));
    limit = std::min(limit, candidate);
  }
  return limit;
}

// Largest c1 such that N(mu) >= mu/(4 pi) + c1 sqrt(mu)/(pi a_1) holds; the
// binding thresholds sit just below the jumps.
double neumann_c1_limit(const Cuboid& r, double q_max) {
  const auto values = lattice::enumerate_values(
      {r, std::sqrt(q_max), lattice::Quadrant::nonnegative});
  const double a1 = r.shortest();
  double limit = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    if (values[i + 1] <= values[i]) continue;
    const double mu = kPiSq * values[i + 1];
    const double below = static_cast<double>(i + 1);
    const double candidate =
        (below - mu / (4.0 * kPi)) * kPi * a1 / std::sqrt(mu);
    limit = std::min(limit, candidate);
  }
  return limit;
}

BoundConstants calibrate_two_dimensional(BoundaryCondition bc) {
  const double q_max = 1e6 / kPiSq;
  std::mt19937_64 rng(0xC0FFEEull);
  std::vector<Cuboid> set;
  set.push_back(Cuboid::cube(2));  // binds near the bottom of the spectrum
  for (int i = 0; i < 100; ++i) set.push_back(random_unit_cuboid(rng, 2));

  double limit = std::numeric_limits<double>::infinity();
  for (const Cuboid& r : set) {
    limit = std::min(limit, bc == BoundaryCondition::dirichlet
                                ? dirichlet_b_limit(r, q_max)
                                : neumann_c1_limit(r, q_max));
  }
  if (!(limit > 0.0) || !std::isfinite(limit)) {
    throw numeric_error("two-dimensional calibration produced a non-positive limit");
  }
  const double shrunk = 0.9 * limit;

  BoundConstants c;
  c.dim = 2;
  c.bc = bc;
  if (bc == BoundaryCondition::dirichlet) {
    // Weyl-term shape (sqrt(lambda) - b/a_1)^2 / (4 pi) expands to the
    // three-term formula with these coefficients.
    c.c1 = 0.5;
    c.c2 = 1.0 / (4.0 * kPi);
    c.b0 = std::min(shrunk, 1.0);
  } else {
    c.c1 = shrunk;
    c.c2 = 0.0;
    c.b0 = 1.0;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Composition for n >= 3: lift the one-dimensional gamma = 1 bound to
// gamma2 = (n-1)/2, then multiply by the (n-1)-dimensional Weyl factor.  All
// Beta-function factors cancel; the code walks the chain anyway so that the
// stated derivation is what actually runs.

BoundConstants compose_higher_dimensional(int n, BoundaryCondition bc) {
  const double gamma2 = 0.5 * (n - 1);
  double lift_mid = 1.0;
  double lift_third = 1.0;
  if (n >= 4) {
    const double s = gamma2 - 1.0;
    lift_mid = beta_fn(2.0, s) / beta_fn(2.0, s);
    lift_third = beta_fn(1.5, s) * semiclassical_constant(1.0, -1) /
                 (beta_fn(2.0, s) * semiclassical_constant(gamma2, -1));
  }
  BoundConstants c;
  c.dim = n;
  c.bc = bc;
  const double seed_c1 =
      bc == BoundaryCondition::dirichlet ? kDirichletSeedC1 : kNeumannSeedC1;
  c.c1 = seed_c1 * lift_mid * semiclassical_constant(gamma2, 0);
  if (bc == BoundaryCondition::dirichlet) {
    c.c2 = kDirichletSeedC2 * lift_third * semiclassical_constant(gamma2, -1) *
           semiclassical_constant(0.0, n - 1) / semiclassical_constant(0.0, n - 2);
    c.b0 = kSeedB0;
  } else {
    c.c2 = 0.0;
    c.b0 = 1.0;
  }
  return c;
}

const double kSlackScaleFloor = 1.0;

struct Driver {
  const VerifySpec& spec;
  BoundReport report;

  void record(bool claim_le, int dim, const std::vector<double>& sides,
              const std::string& check, double parameter, double gamma, double b,
              double lhs, double rhs) {
    const double scale = std::max({std::abs(lhs), std::abs(rhs), kSlackScaleFloor});
    const double margin = (claim_le ? lhs - rhs : rhs - lhs) / scale;
    ++report.checks;
    report.max_slack_used = std::max(report.max_slack_used, std::max(margin, 0.0));
    if (margin > spec.slack) {
      Violation v;
      v.dim = dim;
      v.sides = sides;
      v.check = check;
      v.parameter = parameter;
      v.gamma = gamma;
      v.b = b;
      v.lhs = lhs;
      v.rhs = rhs;
      v.margin = margin;
      report.violations.push_back(std::move(v));
    }
  }

  void check_le(int dim, const std::vector<double>& sides, const std::string& check,
                double parameter, double gamma, double b, double lhs, double rhs) {
    record(true, dim, sides, check, parameter, gamma, b, lhs, rhs);
  }
  void check_ge(int dim, const std::vector<double>& sides, const std::string& check,
                double parameter, double gamma, double b, double lhs, double rhs) {
    record(false, dim, sides, check, parameter, gamma, b, lhs, rhs);
  }
};

std::vector<double> default_or(const std::vector<double>& given,
                               std::initializer_list<double> fallback) {
  return given.empty() ? std::vector<double>(fallback) : given;
}

std::vector<int> default_dims(const std::vector<int>& given,
                              std::initializer_list<int> fallback) {
  return given.empty() ? std::vector<int>(fallback) : given;
}

// Distinct eigenvalue thresholds (absolute units) up to thr, deterministically
// thinned to at most cap entries.  Empty when enumeration would be too large.
std::vector<double> jump_thresholds(const Cuboid& r, BoundaryCondition bc,
                                    double thr, std::size_t cap) {
  const double t = std::sqrt(thr) / kPi;
  const lattice::EllipsoidQuery query{r, t, spectrum::quadrant_for(bc)};
  if (lattice::estimated_count(query) > 3e6) return {};
  const auto values = lattice::enumerate_values(query);
  std::vector<double> distinct;
  distinct.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i + 1 < values.size() && values[i + 1] <= values[i]) continue;
    distinct.push_back(kPiSq * values[i]);
  }
  if (distinct.size() > cap) {
    std::vector<double> thinned;
    thinned.reserve(cap);
    const double stride = static_cast<double>(distinct.size()) / static_cast<double>(cap);
    for (std::size_t j = 0; j < cap; ++j) {
      thinned.push_back(distinct[static_cast<std::size_t>(j * stride)]);
    }
    thinned.back() = distinct.back();
    distinct = std::move(thinned);
  }
  return distinct;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  points = std::max(points, 2);
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(points));
  const double ratio = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) grid.push_back(lo * std::exp(ratio * i));
  grid.back() = hi;
  return grid;
}

std::string describe(const std::vector<int>& dims, int cuboids, const char* range,
                     double range_max, std::uint64_t seed) {
  std::ostringstream os;
  os << "dims={";
  for (std::size_t i = 0; i < dims.size(); ++i) os << (i ? "," : "") << dims[i];
  os << "} cuboids=" << cuboids << " " << range << "<=" << range_max << " seed=0x"
     << std::hex << seed;
  return os.str();
}

void run_polya(Driver& d, BoundaryCondition bc) {
  const auto dims = default_dims(d.spec.dims, {2, 3});
  const int cuboids = d.spec.cuboids > 0 ? d.spec.cuboids : 50;
  const std::int64_t k_max = d.spec.k_max > 0 ? d.spec.k_max : 5000;
  d.report.grid = describe(dims, cuboids, "k", static_cast<double>(k_max), d.spec.seed);
  std::mt19937_64 rng(d.spec.seed);
  for (int n : dims) {
    for (int i = 0; i < cuboids; ++i) {
      const Cuboid r = random_unit_cuboid(rng, n);
      const std::uint64_t need = static_cast<std::uint64_t>(k_max) +
                                 (bc == BoundaryCondition::neumann ? 1 : 0);
      const auto values = spectrum::lowest_reduced_values(r, bc, need);
      for (std::int64_t k = 1; k <= k_max; ++k) {
        const double bound = d.spec.constant_scale * polya_bound(n, k);
        const std::size_t idx = static_cast<std::size_t>(
            bc == BoundaryCondition::neumann ? k : k - 1);
        const double eig = kPiSq * values[idx];
        if (bc == BoundaryCondition::dirichlet) {
          d.check_ge(n, r.sides(), "eigenvalue >= polya", static_cast<double>(k),
                     0.0, 0.0, eig, bound);
        } else {
          d.check_le(n, r.sides(), "eigenvalue <= polya", static_cast<double>(k),
                     0.0, 0.0, eig, bound);
        }
      }
    }
  }
}

std::vector<double> counting_grid(const Cuboid& r, BoundaryCondition bc,
                                  double thr_max, int grid_points) {
  std::vector<double> grid = log_grid(0.05 * kPiSq, thr_max, grid_points);
  for (int i = 0; i <= 16; ++i) {
    grid.push_back(30.0 * kPiSq * i / 16.0);
  }
  for (double e : jump_thresholds(r, bc, thr_max, 2000)) {
    grid.push_back(e);                  // inclusive jump (stresses upper bounds)
    grid.push_back(e * (1.0 - 1e-6));   // just below (stresses lower bounds)
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::remove_if(grid.begin(), grid.end(),
                            [&](double x) { return x < 0.0 || x > thr_max; }),
             grid.end());
  return grid;
}

void run_counting_lemma(Driver& d, BoundaryCondition bc) {
  const auto dims = default_dims(d.spec.dims, {2, 3, 4});
  const int cuboids = d.spec.cuboids > 0 ? d.spec.cuboids : 20;
  const double thr_max =
      d.spec.threshold_max > 0 ? d.spec.threshold_max : 1e4 * kPiSq;
  const auto b_fracs = default_or(d.spec.b_fractions, {0.0, 0.5, 1.0});
  d.report.grid = describe(dims, cuboids, "lambda", thr_max, d.spec.seed);
  std::mt19937_64 rng(d.spec.seed);
  for (int n : dims) {
    BoundConstants constants = bound_constants(n, bc);
    constants.c1 *= d.spec.constant_scale;
    for (int i = 0; i < cuboids; ++i) {
      const Cuboid r = random_unit_cuboid(rng, n);
      const auto grid = counting_grid(r, bc, thr_max, d.spec.grid_points);
      for (double lambda : grid) {
        const double count =
            static_cast<double>(spectrum::counting_function(r, bc, lambda));
        if (bc == BoundaryCondition::dirichlet) {
          for (double frac : b_fracs) {
            const double b = frac * constants.b0;
            const double rhs = dirichlet_count_upper(r, lambda, b, constants);
            d.check_le(n, r.sides(), "count <= three-term", lambda, 0.0, b, count,
                       rhs);
          }
        } else {
          const double rhs = neumann_count_lower(r, lambda, constants);
          d.check_ge(n, r.sides(), "count >= two-term", lambda, 0.0, 0.0, count,
                     rhs);
        }
      }
    }
  }
}

void run_riesz_lemma(Driver& d, BoundaryCondition bc) {
  const auto dims = default_dims(d.spec.dims, {2, 3});
  const int cuboids = d.spec.cuboids > 0 ? d.spec.cuboids : 10;
  const double thr_max =
      d.spec.threshold_max > 0 ? d.spec.threshold_max : 400.0 * kPiSq;
  const auto gammas = default_or(d.spec.gammas, {0.5, 1.0, 1.5, 2.0});
  const auto b_fracs = default_or(d.spec.b_fractions, {0.0, 0.5, 1.0});
  d.report.grid = describe(dims, cuboids, "threshold", thr_max, d.spec.seed);
  std::mt19937_64 rng(d.spec.seed);
  for (int n : dims) {
    BoundConstants constants = bound_constants(n, bc);
    constants.c1 *= d.spec.constant_scale;
    for (int i = 0; i < cuboids; ++i) {
      const Cuboid r = random_unit_cuboid(rng, n);
      const auto grid = log_grid(0.1 * kPiSq, thr_max, d.spec.grid_points);
      for (double threshold : grid) {
        for (double gamma : gammas) {
          const double mean = spectrum::riesz_mean(r, {gamma, threshold, bc});
          if (bc == BoundaryCondition::dirichlet) {
            for (double frac : b_fracs) {
              const double b = frac * constants.b0;
              const double rhs =
                  riesz_bound(r, {gamma, threshold, bc}, b, constants);
              d.check_le(n, r.sides(), "riesz <= three-term", threshold, gamma, b,
                         mean, rhs);
            }
          } else {
            const double rhs = riesz_bound(r, {gamma, threshold, bc}, 0.0, constants);
            d.check_ge(n, r.sides(), "riesz >= two-term", threshold, gamma, 0.0,
                       mean, rhs);
          }
        }
      }
    }
  }
}

void run_average_lemma(Driver& d) {
  const auto dims = default_dims(d.spec.dims, {2, 3});
  const int cuboids = d.spec.cuboids > 0 ? d.spec.cuboids : 10;
  const std::int64_t k_max = d.spec.k_max > 0 ? d.spec.k_max : 2000;
  const auto b_fracs = default_or(d.spec.b_fractions, {0.0, 0.5, 1.0});
  d.report.grid = describe(dims, cuboids, "k", static_cast<double>(k_max), d.spec.seed);
  std::mt19937_64 rng(d.spec.seed);
  std::vector<std::int64_t> ks;
  for (std::int64_t k = 1; k <= std::min<std::int64_t>(32, k_max); ++k) ks.push_back(k);
  for (double x : log_grid(33.0, static_cast<double>(k_max), 24)) {
    const std::int64_t k = static_cast<std::int64_t>(x);
    if (k > 32 && k <= k_max && (ks.empty() || k != ks.back())) ks.push_back(k);
  }
  for (int n : dims) {
    BoundConstants constants = bound_constants(n, BoundaryCondition::dirichlet);
    constants.c1 *= d.spec.constant_scale;
    for (int i = 0; i < cuboids; ++i) {
      const Cuboid r = random_unit_cuboid(rng, n);
      for (std::int64_t k : ks) {
        const double avg =
            spectrum::eigenvalue_sum(r, BoundaryCondition::dirichlet, k).average;
        for (double frac : b_fracs) {
          const double b = frac * constants.b0;
          const double rhs = average_lower_bound(r, k, b, constants);
          d.check_ge(n, r.sides(), "average >= three-term", static_cast<double>(k),
                     0.0, b, avg, rhs);
        }
      }
    }
  }
}

std::vector<double> appendix_grid(Driver& d, double hi) {
  std::mt19937_64 rng(d.spec.seed);
  std::uniform_real_distribution<double> uni(0.0, hi);
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(d.spec.random_points) + 4096);
  for (int i = 0; i < d.spec.random_points; ++i) grid.push_back(uni(rng));
  // Structured points: the bottom range, integer squares (jump locations) and
  // the in-cell extrema of the remainder polynomial.
  for (int i = 0; i <= 256; ++i) grid.push_back(4.0 * i / 256.0);
  const double r_lo = 0.5 - 0.5 / std::sqrt(3.0);
  const double r_hi = 0.5 + 0.5 / std::sqrt(3.0);
  for (int m = 0; m <= 40; ++m) {
    for (double delta : {-1e-9, 0.0, 1e-9}) {
      const double s = static_cast<double>(m) + delta;
      if (s >= 0.0) grid.push_back(s * s);
    }
    grid.push_back((m + r_lo) * (m + r_lo));
    grid.push_back((m + r_hi) * (m + r_hi));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::remove_if(grid.begin(), grid.end(),
                            [&](double x) { return x < 0.0 || x > hi; }),
             grid.end());
  return grid;
}

void run_appendix_dirichlet(Driver& d) {
  const double hi = d.spec.threshold_max > 0 ? d.spec.threshold_max : 1e6;
  const auto b_fracs = default_or(d.spec.b_fractions, {0.0, 0.5, 1.0});
  d.report.grid = describe({1}, 0, "lambda", hi, d.spec.seed);
  const double b0 = kSeedB0 * d.spec.constant_scale;
  const std::vector<double> none;
  for (double lambda : appendix_grid(d, hi)) {
    const double s = std::sqrt(lambda);
    const double exact = oned_riesz1_exact(BoundaryCondition::dirichlet, lambda);
    const double envelope = oned_dirichlet_envelope(lambda);
    d.check_le(1, none, "exact <= envelope", lambda, 0.0, 0.0, exact, envelope);
    for (double frac : b_fracs) {
      const double b = frac * b0;
      const double family = (2.0 / 3.0) * s * (s - b) * (s - b);
      d.check_le(1, none, "exact <= family", lambda, 0.0, b, exact, family);
      if (lambda >= 1.0) {
        d.check_le(1, none, "envelope <= family", lambda, 0.0, b, envelope, family);
      }
    }
  }
}

void run_appendix_neumann(Driver& d) {
  const double hi = d.spec.threshold_max > 0 ? d.spec.threshold_max : 1e6;
  d.report.grid = describe({1}, 0, "mu", hi, d.spec.seed);
  const double c1 = kNeumannSeedC1 * d.spec.constant_scale;
  const std::vector<double> none;
  for (double mu : appendix_grid(d, hi)) {
    const double exact = oned_riesz1_exact(BoundaryCondition::neumann, mu);
    const double envelope = oned_neumann_envelope(mu);
    const double two_term = (2.0 / 3.0) * mu * std::sqrt(mu) + c1 * mu;
    d.check_ge(1, none, "exact >= envelope", mu, 0.0, 0.0, exact, envelope);
    d.check_ge(1, none, "exact >= two-term", mu, 0.0, 0.0, exact, two_term);
    if (mu >= 1.0) {
      d.check_ge(1, none, "envelope >= two-term", mu, 0.0, 0.0, envelope, two_term);
    }
  }
}

}  // namespace

double polya_bound(int n, std::int64_t k, double measure) {
  if (n < 1) throw invalid_input("polya bound: dimension must be >= 1");
  if (k < 0) throw invalid_input("polya bound: index must be >= 0");
  if (!(measure > 0.0)) throw invalid_input("polya bound: measure must be positive");
  return 4.0 * kPi * std::pow(std::exp(std::lgamma(0.5 * n + 1.0)), 2.0 / n) *
         std::pow(static_cast<double>(k) / measure, 2.0 / n);
}

BoundConstants derive_bound_constants(int n, BoundaryCondition bc) {
  if (n < 2) throw invalid_input("bound constants defined for dimensions >= 2");
  if (n == 2) return calibrate_two_dimensional(bc);
  return compose_higher_dimensional(n, bc);
}

const BoundConstants& bound_constants(int n, BoundaryCondition bc) {
  static std::mutex lock;
  static std::map<std::pair<int, int>, BoundConstants> cache;
  std::lock_guard<std::mutex> hold(lock);
  const auto key = std::make_pair(n, static_cast<int>(bc));
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, derive_bound_constants(n, bc)).first;
  return it->second;
}

double dirichlet_count_upper(const Cuboid& r, double lambda, double b,
                             const BoundConstants& c) {
  require_dim(r);
  require_unit_measure(r);
  require_threshold(lambda);
  require_b(c, b);
  const int n = r.dim();
  const double a1 = r.shortest();
  return semiclassical_constant(0.0, n) * std::pow(lambda, 0.5 * n) -
         c.c1 * b * semiclassical_constant(0.0, n - 1) / a1 *
             std::pow(lambda, 0.5 * (n - 1)) +
         c.c2 * b * b * semiclassical_constant(0.0, n - 2) / (a1 * a1) *
             std::pow(lambda, 0.5 * (n - 2));
}

double dirichlet_count_upper(const Cuboid& r, double lambda, double b) {
  return dirichlet_count_upper(r, lambda, b,
                               bound_constants(r.dim(), BoundaryCondition::dirichlet));
}

double neumann_count_lower(const Cuboid& r, double mu, const BoundConstants& c) {
  require_dim(r);
  require_unit_measure(r);
  require_threshold(mu);
  const int n = r.dim();
  return semiclassical_constant(0.0, n) * std::pow(mu, 0.5 * n) +
         c.c1 * semiclassical_constant(0.0, n - 1) / r.shortest() *
             std::pow(mu, 0.5 * (n - 1));
}

double neumann_count_lower(const Cuboid& r, double mu) {
  return neumann_count_lower(r, mu, bound_constants(r.dim(), BoundaryCondition::neumann));
}

double riesz_bound(const Cuboid& r, const spectrum::RieszSpec& spec, double b,
                   const BoundConstants& c) {
  require_dim(r);
  require_unit_measure(r);
  require_threshold(spec.threshold);
  if (!(spec.gamma >= 0.0) || !std::isfinite(spec.gamma)) {
    throw invalid_input("riesz bound: gamma must be >= 0");
  }
  const int n = r.dim();
  const double a1 = r.shortest();
  const double g = spec.gamma;
  const double lam = spec.threshold;
  double value = semiclassical_constant(g, n) * std::pow(lam, g + 0.5 * n);
  if (spec.bc == BoundaryCondition::dirichlet) {
    require_b(c, b);
    value -= c.c1 * b * semiclassical_constant(g, n - 1) / a1 *
             std::pow(lam, g + 0.5 * (n - 1));
    value += c.c2 * b * b * semiclassical_constant(g, n - 2) / (a1 * a1) *
             std::pow(lam, g + 0.5 * (n - 2));
  } else {
    value += c.c1 * semiclassical_constant(g, n - 1) / a1 *
             std::pow(lam, g + 0.5 * (n - 1));
  }
  return value;
}

double riesz_bound(const Cuboid& r, const spectrum::RieszSpec& spec, double b) {
  return riesz_bound(r, spec, b, bound_constants(r.dim(), spec.bc));
}

double average_lower_bound(const Cuboid& r, std::int64_t k, double b,
                           const BoundConstants& c) {
  require_dim(r);
  require_unit_measure(r);
  if (k < 1) throw invalid_input("average bound: k must be >= 1");
  require_b(c, b);
  const int n = r.dim();
  const double a1 = r.shortest();
  const double cap = polya_bound(n, 1);  // 4 pi Gamma(n/2+1)^{2/n}
  const double kk = static_cast<double>(k);
  // Legendre step at lambda* = cap * k^{2/n} applied to the gamma = 1 bound.
  return (static_cast<double>(n) / (n + 2)) * cap * std::pow(kk, 2.0 / n) +
         c.c1 * semiclassical_constant(1.0, n - 1) * std::pow(cap, 0.5 * (n + 1)) *
             (b / a1) * std::pow(kk, 1.0 / n) -
         c.c2 * semiclassical_constant(1.0, n - 2) * std::pow(cap, 0.5 * n) *
             (b * b) / (a1 * a1);
}

double average_lower_bound(const Cuboid& r, std::int64_t k, double b) {
  return average_lower_bound(r, k, b,
                             bound_constants(r.dim(), BoundaryCondition::dirichlet));
}

double oned_riesz1_exact(BoundaryCondition bc, double lambda) {
  require_threshold(lambda);
  const double s = std::sqrt(lambda);
  const double r = s - std::floor(s);
  const double base = (2.0 / 3.0) * lambda * s - 0.5 * lambda +
                      (r - r * r - 1.0 / 6.0) * s +
                      (r - 3.0 * r * r + 2.0 * r * r * r) / 6.0;
  return bc == BoundaryCondition::dirichlet ? base : base + lambda;
}

double oned_dirichlet_envelope(double lambda) {
  require_threshold(lambda);
  const double s = std::sqrt(lambda);
  return (2.0 / 3.0) * lambda * s - 0.5 * lambda + s / 12.0 +
         1.0 / (36.0 * std::sqrt(3.0));
}

double oned_neumann_envelope(double mu) {
  require_threshold(mu);
  const double s = std::sqrt(mu);
  return (2.0 / 3.0) * mu * s + 0.5 * mu - s / 6.0 - 1.0 / (36.0 * std::sqrt(3.0));
}

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> suites = {
      "polya-D",  "polya-N",  "lemma21",    "lemma22",   "lemma54",
      "lemma55",  "lemma56",  "appendixA1", "appendixA2"};
  return suites;
}

BoundReport verify_bound(const VerifySpec& spec) {
  Driver d{spec, {}};
  d.report.bound_id = spec.suite;
  d.report.seed = spec.seed;
  if (spec.suite == "polya-D") {
    run_polya(d, BoundaryCondition::dirichlet);
  } else if (spec.suite == "polya-N") {
    run_polya(d, BoundaryCondition::neumann);
  } else if (spec.suite == "lemma21") {
    run_counting_lemma(d, BoundaryCondition::dirichlet);
  } else if (spec.suite == "lemma22") {
    run_counting_lemma(d, BoundaryCondition::neumann);
  } else if (spec.suite == "lemma54") {
    run_riesz_lemma(d, BoundaryCondition::dirichlet);
  } else if (spec.suite == "lemma55") {
    run_riesz_lemma(d, BoundaryCondition::neumann);
  } else if (spec.suite == "lemma56") {
    run_average_lemma(d);
  } else if (spec.suite == "appendixA1") {
    run_appendix_dirichlet(d);
  } else if (spec.suite == "appendixA2") {
    run_appendix_neumann(d);
  } else {
    throw invalid_input("unknown verification suite: " + spec.suite);
  }
  return std::move(d.report);
}

}  // namespace cuboidspec::bounds
