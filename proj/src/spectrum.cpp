#include "cuboid_spectra/spectrum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace cuboidspec::spectrum {
namespace {

using lattice::EllipsoidQuery;
using lattice::Quadrant;

constexpr double kPi = M_PI;
constexpr double kPiSq = M_PI * M_PI;

std::uint64_t required_rank(BoundaryCondition bc, std::int64_t k) {
  if (bc == BoundaryCondition::dirichlet) {
    if (k < 1) throw invalid_input("Dirichlet eigenvalue index must be >= 1");
    return static_cast<std::uint64_t>(k);
  }
  if (k < 0) throw invalid_input("Neumann eigenvalue index must be >= 0");
  return static_cast<std::uint64_t>(k) + 1;  // mu_0 = 0 occupies rank 1
}

// Smallest radius whose inclusive count reaches `rank`, found by growing a
// volume-based seed.  The returned radius may overshoot; callers only rely on
// count(t) >= rank.
double radius_for_rank(const Cuboid& r, Quadrant quad, std::uint64_t rank) {
  const int n = r.dim();
  const double orthant = std::pow(2.0, n);
  // Volume term: count ~ omega_n t^n vol(R) / 2^n, plus a surface-sized pad
  // so the Dirichlet deficit does not force extra growth rounds.
  double pad = 2.0;
  for (double a : r.sides()) pad += 0.75 / a;
  double t = std::pow(orthant * (static_cast<double>(rank) + pad) /
                          (unit_ball_volume(n) * r.measure()),
                      1.0 / n);
  if (n >= 2) {
    double surface = 0.0;
    for (double a : r.sides()) surface += 1.0 / a;
    t += 0.6 * surface / n;
  }
  for (int round = 0; round < 200; ++round) {
    const std::uint64_t have = lattice::count_points({r, t, quad});
    if (have >= rank) return t;
    const double ratio = static_cast<double>(rank + 1) /
                         static_cast<double>(std::max<std::uint64_t>(have, 1));
    t *= std::max(1.12, 1.04 * std::pow(ratio, 1.0 / n));
  }
  throw numeric_error("radius search for eigenvalue rank did not converge");
}

thread_local lattice::ValueMultiset g_scratch;

// Gauss-Legendre nodes/weights on [-1, 1], computed once by Newton iteration
// on the Legendre recurrence.
template <int N>
struct GaussLegendre {
  std::array<double, N> node{};
  std::array<double, N> weight{};
  GaussLegendre() {
    const int m = (N + 1) / 2;
    for (int i = 0; i < m; ++i) {
      double x = std::cos(kPi * (i + 0.75) / (N + 0.5));
      double pp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = 0.0;
        for (int j = 0; j < N; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
        }
        pp = N * (x * p0 - p1) / (x * x - 1.0);
        const double dx = p0 / pp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      node[static_cast<std::size_t>(i)] = -x;
      node[static_cast<std::size_t>(N - 1 - i)] = x;
      weight[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * pp * pp);
      weight[static_cast<std::size_t>(N - 1 - i)] = weight[static_cast<std::size_t>(i)];
    }
  }
};

const GaussLegendre<32>& gl32() {
  static const GaussLegendre<32> table;
  return table;
}

template <class F>
double gl32_integrate(const F& f, double a, double b) {
  const auto& q = gl32();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  KahanSum acc;
  for (int i = 0; i < 32; ++i) {
    acc.add(q.weight[static_cast<std::size_t>(i)] *
            f(mid + half * q.node[static_cast<std::size_t>(i)]));
  }
  return half * acc.value();
}

// Bisects until the local error fits inside an absolute budget that halves
// per level.  Endpoint root singularities (error ~ h^{3/2}) then terminate at
// moderate depth because the local error shrinks faster than the budget.
template <class F>
double adaptive_gl(const F& f, double a, double b, double abs_budget, int depth) {
  const double whole = gl32_integrate(f, a, b);
  const double mid = 0.5 * (a + b);
  const double split = gl32_integrate(f, a, mid) + gl32_integrate(f, mid, b);
  const double err = std::abs(whole - split);
  if (!std::isfinite(split)) throw numeric_error("quadrature produced a non-finite value");
  if (err <= abs_budget || depth >= 48) return split;
  return adaptive_gl(f, a, mid, 0.5 * abs_budget, depth + 1) +
         adaptive_gl(f, mid, b, 0.5 * abs_budget, depth + 1);
}

void validate_threshold(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw invalid_input("spectral threshold must be >= 0 and finite");
  }
}

}  // namespace

lattice::Quadrant quadrant_for(BoundaryCondition bc) {
  return bc == BoundaryCondition::dirichlet ? Quadrant::positive : Quadrant::nonnegative;
}

std::vector<double> lowest_reduced_values(const Cuboid& r, BoundaryCondition bc,
                                          std::uint64_t count) {
  if (count == 0) return {};
  const Quadrant quad = quadrant_for(bc);
  const double t = radius_for_rank(r, quad, count);
  lattice::ValueMultiset values = lattice::enumerate_values({r, t, quad});
  values.resize(static_cast<std::size_t>(count));
  return values;
}

double kth_reduced_value(const Cuboid& r, BoundaryCondition bc, std::uint64_t k_rank) {
  if (k_rank == 0) throw invalid_input("eigenvalue rank must be >= 1");
  const Quadrant quad = quadrant_for(bc);
  const double t = radius_for_rank(r, quad, k_rank);
  lattice::enumerate_unsorted_into({r, t, quad}, g_scratch);
  auto kth = g_scratch.begin() + static_cast<std::ptrdiff_t>(k_rank - 1);
  std::nth_element(g_scratch.begin(), kth, g_scratch.end());
  return *kth;
}

double eigenvalue(const Cuboid& r, BoundaryCondition bc, std::int64_t k) {
  const std::uint64_t rank = required_rank(bc, k);
  return kPiSq * kth_reduced_value(r, bc, rank);
}

std::uint64_t counting_function(const Cuboid& r, BoundaryCondition bc, double lambda) {
  validate_threshold(lambda);
  const double t = std::sqrt(lambda) / kPi;
  return lattice::count_points({r, t, quadrant_for(bc)});
}

double riesz_mean(const Cuboid& r, const RieszSpec& spec) {
  validate_threshold(spec.threshold);
  if (!(spec.gamma >= 0.0) || !std::isfinite(spec.gamma)) {
    throw invalid_input("Riesz order gamma must be >= 0 and finite");
  }
  if (spec.gamma == 0.0) {
    return static_cast<double>(counting_function(r, spec.bc, spec.threshold));
  }
  const double q_threshold = spec.threshold / kPiSq;
  const double t = std::sqrt(spec.threshold) / kPi;
  const lattice::ValueMultiset values =
      lattice::enumerate_values({r, t, quadrant_for(spec.bc)});
  KahanSum acc;
  const bool linear = spec.gamma == 1.0;
  for (double q : values) {
    const double gap = q_threshold - q;
    if (gap <= 0.0) continue;  // boundary-guard admits may sit a hair above
    acc.add(linear ? gap : std::pow(gap, spec.gamma));
  }
  return std::pow(kPiSq, spec.gamma) * acc.value();
}

SumResult eigenvalue_sum(const Cuboid& r, BoundaryCondition bc, std::int64_t k) {
  if (bc == BoundaryCondition::neumann && k == 0) return {0.0, 0.0};
  const std::uint64_t rank = required_rank(bc, k);
  const Quadrant quad = quadrant_for(bc);
  const double t = radius_for_rank(r, quad, rank);
  lattice::enumerate_unsorted_into({r, t, quad}, g_scratch);
  auto kth = g_scratch.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(g_scratch.begin(), kth, g_scratch.end());
  std::sort(g_scratch.begin(), kth + 1);
  KahanSum acc;
  for (auto it = g_scratch.begin(); it != kth + 1; ++it) acc.add(*it);
  SumResult result;
  result.sum = kPiSq * acc.value();
  result.average = result.sum / static_cast<double>(k);
  return result;
}

double aizenman_lieb_lift(const Cuboid& r, BoundaryCondition bc, double gamma1,
                          double gamma2, double eta) {
  validate_threshold(eta);
  if (!(gamma1 >= 0.0) || !(gamma2 > gamma1) || !std::isfinite(gamma2)) {
    throw invalid_input("lift requires 0 <= gamma1 < gamma2");
  }
  if (eta == 0.0) return 0.0;

  const double t = std::sqrt(eta) / kPi;
  const lattice::ValueMultiset reduced =
      lattice::enumerate_values({r, t, quadrant_for(bc)});
  std::vector<double> evals(reduced.size());
  for (std::size_t i = 0; i < reduced.size(); ++i) evals[i] = kPiSq * reduced[i];

  // Riesz_{gamma1} from the sorted eigenvalues below eta.
  auto riesz_at = [&](double x) -> double {
    auto end = std::upper_bound(evals.begin(), evals.end(), x);
    if (gamma1 == 0.0) return static_cast<double>(end - evals.begin());
    KahanSum acc;
    for (auto it = evals.begin(); it != end; ++it) {
      const double gap = x - *it;
      if (gap > 0.0) acc.add(gamma1 == 1.0 ? gap : std::pow(gap, gamma1));
    }
    return acc.value();
  };

  // Substituting tau = u^2 removes the integrable endpoint singularity:
  //   integral_0^eta tau^{g-1} R(eta - tau) dtau
  //     = integral_0^sqrt(eta) 2 u^{2g-1} R(eta - u^2) du,   g = gamma2 - gamma1.
  const double g = gamma2 - gamma1;
  const double u_max = std::sqrt(eta);
  auto integrand = [&](double u) {
    return 2.0 * std::pow(u, 2.0 * g - 1.0) * riesz_at(eta - u * u);
  };

  // Split at the kinks u_i = sqrt(eta - e_i); the integrand is smooth between
  // consecutive kinks.
  std::vector<double> cuts;
  cuts.push_back(0.0);
  for (double e : evals) {
    if (e < eta) {
      const double u = std::sqrt(eta - e);
      if (u > 0.0 && u < u_max) cuts.push_back(u);
    }
  }
  cuts.push_back(u_max);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [&](double a, double b) { return b - a < 1e-13 * u_max; }),
             cuts.end());
  if (cuts.back() < u_max) cuts.push_back(u_max);

  // Rough pass to size the absolute error budgets (integrand is >= 0, so the
  // rough interval values give the right scale).
  std::vector<double> rough(cuts.size() - 1);
  double rough_total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    rough[i] = gl32_integrate(integrand, cuts[i], cuts[i + 1]);
    rough_total += std::abs(rough[i]);
  }
  const double n_int = static_cast<double>(rough.size());
  KahanSum integral;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double budget =
        4e-9 * std::max(std::abs(rough[i]), rough_total / (4.0 * n_int)) + 1e-300;
    integral.add(adaptive_gl(integrand, cuts[i], cuts[i + 1], budget, 0));
  }
  const double log_beta = std::lgamma(1.0 + gamma1) + std::lgamma(g) -
                          std::lgamma(1.0 + gamma2);
  return integral.value() / std::exp(log_beta);
}

LegendreResult legendre_sum(const Cuboid& r, std::int64_t k) {
  if (k < 1) throw invalid_input("Legendre sum requires k >= 1");
  const std::uint64_t rank = static_cast<std::uint64_t>(k);
  const Quadrant quad = quadrant_for(BoundaryCondition::dirichlet);
  const double t = radius_for_rank(r, quad, rank);
  lattice::enumerate_unsorted_into({r, t, quad}, g_scratch);
  auto kth = g_scratch.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(g_scratch.begin(), kth, g_scratch.end());
  std::sort(g_scratch.begin(), kth + 1);
  const double q_k = *kth;
  // k lambda - Riesz_1(lambda) is maximised wherever N(lambda) = k, in
  // particular at lambda = lambda_k itself.
  KahanSum riesz1;
  for (auto it = g_scratch.begin(); it != kth + 1; ++it) {
    const double gap = q_k - *it;
    if (gap > 0.0) riesz1.add(gap);
  }
  LegendreResult result;
  result.value = kPiSq * (static_cast<double>(k) * q_k - riesz1.value());
  result.argmax = kPiSq * q_k;
  return result;
}

}  // namespace cuboidspec::spectrum
