// Acceptance gate: twelve end-to-end criteria covering the lattice engine,
// the inequality suites, the optimiser, the asymptotic trend checks, and
// CLI determinism.  Each criterion prints exactly one PASS/FAIL line with
// its pinned tolerances and measured numbers; the binary exits non-zero if
// any selected criterion fails.
//
//   usage: acceptance [criterion-numbers...]   (default: all twelve)
//
// Design notes.  The oracles here are deliberately independent of the code
// under test where the criterion demands it: criterion 1 re-counts lattice
// points with naive nested loops, criterion 4 re-sums the one-dimensional
// Riesz means directly.  Trend criteria (9-11) evaluate strided index grids
// (strides printed in the line) because the observables are window medians
// and fitted exponents, which subsampling estimates faithfully; running
// every index would multiply the runtime roughly tenfold without changing
// the medians' reading.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "cuboid_spectra/asymptotics.hpp"
#include "cuboid_spectra/bounds.hpp"
#include "cuboid_spectra/core.hpp"
#include "cuboid_spectra/lattice.hpp"
#include "cuboid_spectra/optimize.hpp"
#include "cuboid_spectra/spectrum.hpp"

namespace {

using namespace cuboidspec;

constexpr double kPi = 3.14159265358979323846;
constexpr double kPiSq = kPi * kPi;
constexpr std::uint64_t kSeed = 0xC0FFEE;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, const char* spec = "%.4g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// ---------------------------------------------------------------------------
// Criterion 1: recursive lattice counts equal a naive nested-loop count.

std::uint64_t naive_count(const Cuboid& r, double t, lattice::Quadrant quad) {
  // Same inclusive budget as the library's documented admission rule.
  const double budget =
      t * t * (1.0 + 4.0 * std::numeric_limits<double>::epsilon());
  const int n = r.dim();
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(j)] = 1.0 / (r.side(j) * r.side(j));
  std::uint64_t total = 0;
  std::function<void(int, double)> walk = [&](int j, double remaining) {
    const double wj = w[static_cast<std::size_t>(j)];
    const long long m =
        static_cast<long long>(std::floor(std::sqrt(remaining / wj)) + 2.0);
    const long long lo = quad == lattice::Quadrant::full ? -m
                         : quad == lattice::Quadrant::positive ? 1
                                                               : 0;
    for (long long i = lo; i <= m; ++i) {
      const double used = wj * static_cast<double>(i) * static_cast<double>(i);
      if (used > remaining) {
        if (i > 0) break;
        continue;
      }
      if (j + 1 == n) {
        ++total;
      } else {
        walk(j + 1, remaining - used);
      }
    }
  };
  walk(0, budget);
  return total;
}

Outcome criterion_lattice_oracle() {
  std::mt19937_64 rng(kSeed);
  const double ts[] = {1.0, 2.5, 5.0, 10.0};
  const lattice::Quadrant quads[] = {lattice::Quadrant::full,
                                     lattice::Quadrant::positive,
                                     lattice::Quadrant::nonnegative};
  std::uint64_t comparisons = 0;
  for (int n : {2, 3, 4}) {
    for (int i = 0; i < 50; ++i) {
      const Cuboid r = random_unit_cuboid(rng, n);
      for (double t : ts) {
        for (lattice::Quadrant q : quads) {
          const std::uint64_t fast = lattice::count_points({r, t, q});
          const std::uint64_t naive = naive_count(r, t, q);
          ++comparisons;
          if (fast != naive) {
            return {false, "mismatch n=" + std::to_string(n) +
                               " t=" + fmt(t) + " quadrant=" + to_string(q) +
                               ": recursive " + std::to_string(fast) +
                               " vs naive " + std::to_string(naive)};
          }
        }
      }
    }
  }
  return {true, std::to_string(comparisons) +
                    "/1800 exact matches (n in {2,3,4}, 50 cuboids, t in "
                    "{1,2.5,5,10}, all quadrants)"};
}

// ---------------------------------------------------------------------------
// Criterion 2: inclusion-exclusion decomposition is exact.

Outcome criterion_decomposition() {
  std::mt19937_64 rng(kSeed + 2);
  int checks = 0;
  for (int n : {2, 3, 4}) {
    for (int i = 0; i < 20; ++i) {
      const Cuboid r = random_unit_cuboid(rng, n);
      for (double t : {5.0, 12.5, 20.0}) {
        const lattice::DecompositionReport rep =
            lattice::symmetric_decomposition_check(r, t);
        ++checks;
        if (!rep.consistent || rep.full_count != rep.reconstructed) {
          return {false, "inconsistent at n=" + std::to_string(n) +
                             " t=" + fmt(t) + ": full " +
                             std::to_string(rep.full_count) + " vs " +
                             std::to_string(rep.reconstructed)};
        }
      }
    }
  }
  return {true, std::to_string(checks) +
                    "/180 identities exact (n in {2,3,4}, 20 cuboids, t in "
                    "{5,12.5,20})"};
}

// ---------------------------------------------------------------------------
// Criterion 3: two-sided Polya suites are violation-free.

Outcome criterion_polya() {
  std::uint64_t checks = 0;
  for (const char* suite : {"polya-D", "polya-N"}) {
    bounds::VerifySpec spec;
    spec.suite = suite;
    spec.dims = {2, 3};
    spec.cuboids = 50;
    spec.k_max = 5000;
    spec.slack = 1e-9;
    spec.seed = kSeed;
    const bounds::BoundReport rep = bounds::verify_bound(spec);
    checks += rep.checks;
    if (!rep.violations.empty()) {
      const auto& v = rep.violations.front();
      return {false, std::string(suite) + ": " +
                         std::to_string(rep.violations.size()) +
                         " violations, first at n=" + std::to_string(v.dim) +
                         " k=" + fmt(v.parameter) + " margin=" + fmt(v.margin)};
    }
  }
  return {true, std::to_string(checks) +
                    " checks, zero violations (n in {2,3}, 50 cuboids, k <= "
                    "5000, relative slack 1e-9)"};
}

// ---------------------------------------------------------------------------
// Criterion 4: one-dimensional closed forms + appendix inequality suites,
// with the scaled-constant negative control.

Outcome criterion_appendix() {
  // Exactness: closed form vs direct summation, 1e4 random lambda.
  std::mt19937_64 rng(kSeed + 4);
  std::uniform_real_distribution<double> dist(0.0, 1e6);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double lambda = dist(rng);
    for (BoundaryCondition bc :
         {BoundaryCondition::dirichlet, BoundaryCondition::neumann}) {
      // Reduced units: the one-dimensional spectrum is j^2.
      double direct = 0.0;
      const long long start = bc == BoundaryCondition::dirichlet ? 1 : 0;
      const long long stop =
          static_cast<long long>(std::floor(std::sqrt(lambda))) + 1;
      for (long long j = stop; j >= start; --j) {  // ascending magnitude sum
        const double gap = lambda - static_cast<double>(j * j);
        if (gap > 0.0) direct += gap;
      }
      const double closed = bounds::oned_riesz1_exact(bc, lambda);
      const double err = std::abs(closed - direct) / std::max(1.0, direct);
      worst = std::max(worst, err);
      if (err > 1e-10) {
        return {false, "closed form off at lambda=" + fmt(lambda, "%.6g") +
                           " bc=" + to_string(bc) + ": rel err " + fmt(err)};
      }
    }
  }

  const auto run = [](const char* suite, double scale) {
    bounds::VerifySpec spec;
    spec.suite = suite;
    spec.seed = kSeed;
    spec.constant_scale = scale;
    return bounds::verify_bound(spec);
  };
  const bounds::BoundReport a1 = run("appendixA1", 1.0);
  if (!a1.violations.empty()) {
    return {false, "appendixA1 has " + std::to_string(a1.violations.size()) +
                       " violations"};
  }
  const bounds::BoundReport a2 = run("appendixA2", 1.0);
  if (!a2.violations.empty()) {
    return {false, "appendixA2 has " + std::to_string(a2.violations.size()) +
                       " violations"};
  }
  const bounds::BoundReport neg = run("appendixA2", 1.001);
  if (neg.violations.empty()) {
    return {false, "negative control failed: appendixA2 with c1 x 1.001 "
                   "reported no violations"};
  }
  return {true, "closed forms match direct sums (1e4 lambda in [0,1e6], worst "
                "rel err " +
                    fmt(worst) + " <= 1e-10); A1+A2 clean; c1 x 1.001 breaks " +
                    std::to_string(neg.violations.size()) + " checks"};
}

// ---------------------------------------------------------------------------
// Criterion 5: counting and Riesz lemma suites with derived constants.

Outcome criterion_lemma_suites() {
  std::uint64_t checks = 0;
  const auto run = [&checks](const char* suite, std::vector<int> dims,
                             double thr_max) -> std::string {
    bounds::VerifySpec spec;
    spec.suite = suite;
    spec.dims = std::move(dims);
    spec.cuboids = 20;
    spec.threshold_max = thr_max;
    spec.b_fractions = {0.0, 0.5, 1.0};
    spec.seed = kSeed;
    const bounds::BoundReport rep = bounds::verify_bound(spec);
    checks += rep.checks;
    if (!rep.violations.empty()) {
      const auto& v = rep.violations.front();
      return std::string(suite) + " n=" + std::to_string(v.dim) + ": " +
             std::to_string(rep.violations.size()) +
             " violations, first margin " + fmt(v.margin);
    }
    return {};
  };
  // Counting lemma at the full grid; the Riesz lemma keeps the pinned
  // threshold at n in {2,3} and caps n in {4,5} so the largest enumeration
  // stays inside the library's 1e8-value budget.
  const struct {
    const char* suite;
    std::vector<int> dims;
    double thr;
  } runs[] = {
      {"lemma21", {2, 3, 4, 5}, 1e4 * kPiSq},
      {"lemma22", {2, 3}, 1e4 * kPiSq},
      {"lemma22", {4}, 2.5e3 * kPiSq},
      {"lemma22", {5}, 1e3 * kPiSq},
  };
  for (const auto& r : runs) {
    const std::string err = run(r.suite, r.dims, r.thr);
    if (!err.empty()) return {false, err};
  }
  return {true, std::to_string(checks) +
                    " checks, zero violations (20 cuboids, b in {0,b0/2,b0}; "
                    "counting n in {2,3,4,5} to 1e4 pi^2; riesz to 1e4 pi^2 "
                    "for n in {2,3}, capped 2.5e3/1e3 pi^2 for n=4/5)"};
}

// ---------------------------------------------------------------------------
// Criterion 6: Aizenman-Lieb quadrature lift vs direct Riesz means.

Outcome criterion_aizenman_lieb() {
  std::mt19937_64 rng(kSeed + 6);
  std::vector<Cuboid> cuboids;
  cuboids.push_back(Cuboid::cube(2));
  cuboids.push_back(random_unit_cuboid(rng, 2));
  cuboids.push_back(random_unit_cuboid(rng, 3));
  const double etas[] = {5.0 * kPiSq, 12.0 * kPiSq, 25.0 * kPiSq,
                         50.0 * kPiSq, 80.0 * kPiSq};
  double worst = 0.0;
  int checks = 0;
  for (const Cuboid& r : cuboids) {
    for (BoundaryCondition bc :
         {BoundaryCondition::dirichlet, BoundaryCondition::neumann}) {
      for (double gamma2 : {1.0, 1.5}) {
        for (double eta : etas) {
          const double lifted = spectrum::aizenman_lieb_lift(r, bc, 0.0, gamma2, eta);
          const double direct = spectrum::riesz_mean(r, {gamma2, eta, bc});
          const double err =
              std::abs(lifted - direct) / std::max(1e-12, std::abs(direct));
          worst = std::max(worst, err);
          ++checks;
          if (err > 1e-6) {
            return {false, "lift off at n=" + std::to_string(r.dim()) +
                               " bc=" + to_string(bc) + " gamma=" + fmt(gamma2) +
                               " eta=" + fmt(eta / kPiSq) + " pi^2: rel err " +
                               fmt(err)};
          }
        }
      }
    }
  }
  return {true, std::to_string(checks) +
                    " lifts within 1e-6 relative (worst " + fmt(worst) +
                    "; gamma 0 -> {1,3/2}, Q2 + 2 random cuboids, 5 "
                    "thresholds, both bc)"};
}

// ---------------------------------------------------------------------------
// Criterion 7: Legendre-transform bridge to eigenvalue sums.

Outcome criterion_legendre() {
  std::mt19937_64 rng(kSeed + 7);
  double worst = 0.0;
  int checks = 0;
  for (int c = 0; c < 10; ++c) {
    const int n = c < 5 ? 2 : 3;
    const Cuboid r = random_unit_cuboid(rng, n);
    const auto reduced =
        spectrum::lowest_reduced_values(r, BoundaryCondition::dirichlet, 1001);
    double running_sum = 0.0;
    for (std::int64_t k = 1; k <= 1000; ++k) {
      running_sum += kPiSq * reduced[static_cast<std::size_t>(k - 1)];
      const spectrum::LegendreResult leg = spectrum::legendre_sum(r, k);
      const double err = std::abs(leg.value - running_sum) /
                         std::max(1.0, running_sum);
      worst = std::max(worst, err);
      ++checks;
      if (err > 1e-9) {
        return {false, "sum mismatch n=" + std::to_string(n) +
                           " k=" + std::to_string(k) + ": rel err " + fmt(err)};
      }
      const double lo = kPiSq * reduced[static_cast<std::size_t>(k - 1)];
      const double hi = kPiSq * reduced[static_cast<std::size_t>(k)];
      if (leg.argmax < lo * (1.0 - 1e-9) - 1e-9 ||
          leg.argmax > hi * (1.0 + 1e-9) + 1e-9) {
        return {false, "argmax outside [lambda_k, lambda_k+1] at n=" +
                           std::to_string(n) + " k=" + std::to_string(k)};
      }
    }
  }
  return {true, std::to_string(checks) +
                    " sums within 1e-9 relative (worst " + fmt(worst) +
                    "), argmax in [lambda_k, lambda_k+1] (k <= 1000, 10 "
                    "cuboids)"};
}

// ---------------------------------------------------------------------------
// Criterion 8: closed-form planar optima.

Outcome criterion_closed_form_optima() {
  optimize::Options opts;  // defaults: 8 starts, budget 2000, seed 0xC0FFEE
  const struct {
    std::int64_t k;
    double value;
    double a1, a2;
  } targets[] = {
      {1, 2.0 * kPiSq, 1.0, 1.0},
      {2, 4.0 * kPiSq, 1.0 / std::sqrt(2.0), std::sqrt(2.0)},
  };
  std::string note;
  for (const auto& tg : targets) {
    const optimize::OptimizationResult res = optimize::optimize_eigenvalue(
        2, BoundaryCondition::dirichlet, tg.k, opts);
    const double value_err = std::abs(res.optimal_value - tg.value) / tg.value;
    const double side_err =
        std::max(std::abs(res.optimal_cuboid.side(0) - tg.a1),
                 std::abs(res.optimal_cuboid.side(1) - tg.a2));
    if (value_err > 1e-6 || side_err > 1e-4) {
      return {false, "lambda_" + std::to_string(tg.k) + " off: value rel err " +
                         fmt(value_err) + ", side abs err " + fmt(side_err)};
    }
    note += (note.empty() ? "" : "; ") + ("lambda_" + std::to_string(tg.k)) +
            " value err " + fmt(value_err) + ", side err " + fmt(side_err);
  }
  return {true, note + " (tolerances 1e-6 value, 1e-4 sides)"};
}

// ---------------------------------------------------------------------------
// Criteria 9/10 share strided optimisation sweeps; cache them.

struct SweepSeries {
  std::vector<std::int64_t> ks;
  std::vector<double> delta;
  std::vector<double> cube_gap;  // |value_at_cube - value|
};

const SweepSeries& cached_sweep(int dim, BoundaryCondition bc,
                                std::int64_t k_max, std::int64_t stride) {
  static std::map<std::tuple<int, int, std::int64_t, std::int64_t>, SweepSeries>
      cache;
  const auto key = std::make_tuple(dim, static_cast<int>(bc), k_max, stride);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  optimize::SweepSpec spec;
  spec.target = bc == BoundaryCondition::neumann ? optimize::Target::mu_k
                                                 : optimize::Target::lambda_k;
  spec.bc = bc;
  spec.dim = dim;
  spec.k_min = 1;
  spec.k_max = k_max;
  spec.k_step = stride;
  spec.options.seed = kSeed;
  SweepSeries series;
  optimize::sweep(spec, [&series](const optimize::OptimizationResult& r) {
    series.ks.push_back(r.k);
    series.delta.push_back(r.delta);
    series.cube_gap.push_back(std::abs(r.value_at_cube - r.optimal_value));
  });
  return cache.emplace(key, std::move(series)).first->second;
}

struct TrendReading {
  double early_median = 0.0;
  double late_median = 0.0;
  double fitted_exponent = 0.0;
  bool decreasing = false;
  bool negative_rate = false;
};

TrendReading read_trend(const SweepSeries& s, int dim, std::int64_t split) {
  std::vector<double> early, late;
  std::vector<std::pair<double, double>> series;
  for (std::size_t i = 0; i < s.ks.size(); ++i) {
    (s.ks[i] < split ? early : late).push_back(s.delta[i]);
    series.emplace_back(static_cast<double>(s.ks[i]), s.delta[i]);
  }
  TrendReading t;
  t.early_median = median(early);
  t.late_median = median(late);
  const asymptotics::FitReport fit = asymptotics::fit_convergence_rate(
      series, asymptotics::SeriesKind::delta, dim);
  t.fitted_exponent = fit.fitted_exponent;
  t.decreasing = t.late_median < t.early_median;
  t.negative_rate = !fit.degenerate && fit.fitted_exponent < 0.0;
  return t;
}

Outcome criterion_convergence() {
  std::string note;
  const struct {
    int dim;
    std::int64_t k_max, stride, split;
  } grids[] = {{2, 10000, 10, 5000}, {3, 3000, 10, 1500}};
  for (const auto& [dim, k_max, stride, split] : grids) {
    for (BoundaryCondition bc :
         {BoundaryCondition::dirichlet, BoundaryCondition::neumann}) {
      const SweepSeries& s = cached_sweep(dim, bc, k_max, stride);
      const TrendReading t = read_trend(s, dim, split);
      const std::string tag = "n=" + std::to_string(dim) + " " +
                              to_string(bc) + " medians " +
                              fmt(t.early_median) + " -> " +
                              fmt(t.late_median) + ", rate " +
                              fmt(t.fitted_exponent);
      if (!t.decreasing || !t.negative_rate) {
        return {false, tag + " (need strictly smaller late median and "
                             "negative fitted exponent)"};
      }
      note += (note.empty() ? "" : "; ") + tag;
    }
  }
  return {true, note + " (delta_k window medians, stride 10, split at "
                       "k=5e3 / 1.5e3)"};
}

// ---------------------------------------------------------------------------
// Criterion 10: stability series shows no growth beyond the theoretical
// envelope.  The gap |lambda_k(Q) - lambda_k*| may grow like
// k^{(theta_n-(n-2))/n}, which is positive for n < 4 and exactly 0 (true
// boundedness) from n = 4 on; so the n=2 run checks the fitted exponent
// against that reference (+0.15 margin, as in criterion 11), while the
// n=5 exploratory run must also set no late record -- its envelope is
// flat, so a last-quartile record would signal growth.

Outcome criterion_stability() {
  std::string note;
  const struct {
    int dim;
    std::int64_t k_max, stride;
    bool forbid_late_record;
  } grids[] = {{2, 10000, 10, false}, {5, 2000, 20, true}};
  for (const auto& [dim, k_max, stride, forbid_late_record] : grids) {
    const SweepSeries& s =
        cached_sweep(dim, BoundaryCondition::dirichlet, k_max, stride);
    const std::size_t m = s.cube_gap.size();
    const std::size_t q = m - m / 4;
    double pre_max = 0.0, last_max = 0.0, global_max = 0.0;
    std::vector<std::pair<double, double>> series;
    for (std::size_t i = 0; i < m; ++i) {
      (i < q ? pre_max : last_max) =
          std::max(i < q ? pre_max : last_max, s.cube_gap[i]);
      global_max = std::max(global_max, s.cube_gap[i]);
      series.emplace_back(static_cast<double>(s.ks[i]), s.cube_gap[i]);
    }
    const asymptotics::FitReport fit = asymptotics::fit_convergence_rate(
        series, asymptotics::SeriesKind::stability, dim);
    const double cap = fit.reference_exponent + 0.15;
    const std::string tag =
        "n=" + std::to_string(dim) + " quartile maxes " + fmt(pre_max) +
        " -> " + fmt(last_max) + " (global " + fmt(global_max) + "), rate " +
        fmt(fit.fitted_exponent) + " <= " + fmt(cap);
    if (last_max > global_max) {
      return {false, tag + " (last-quartile max exceeds the global max)"};
    }
    if (fit.degenerate || !(fit.fitted_exponent <= cap)) {
      return {false, tag + " (rate above the stability envelope)"};
    }
    if (forbid_late_record && last_max > pre_max) {
      return {false, tag + " (late record in a flat-envelope dimension)"};
    }
    note += (note.empty() ? "" : "; ") + tag;
  }
  return {true, note + " (|lambda_k(Q) - lambda_k*|; n=2 k <= 1e4 against "
                       "envelope (theta_2)/2, n=5 k <= 2000 flat envelope + "
                       "no late record)"};
}

// ---------------------------------------------------------------------------
// Criterion 11: two-term residual exponents stay under theta_n/2 + 0.15.

Outcome criterion_two_term_envelope() {
  const std::vector<double> grid = asymptotics::dyadic_grid(4.0, 1000.0, 12);
  std::string note;
  for (int n : {2, 3}) {
    const Cuboid q = Cuboid::cube(n);
    const double theta = ThetaTable::default_theta(n);
    const double cap = 0.5 * theta + 0.15;
    for (const auto mode : {asymptotics::RemainderMode::counting_dirichlet,
                            asymptotics::RemainderMode::counting_neumann}) {
      const asymptotics::FitReport fit =
          asymptotics::fit_remainder_exponent(q, mode, grid);
      const std::string tag = fit.series_id + " exponent " +
                              fmt(fit.fitted_exponent) + " <= " + fmt(cap);
      if (fit.degenerate || !(fit.fitted_exponent <= cap)) {
        return {false, tag + " violated"};
      }
      note += (note.empty() ? "" : "; ") + tag;
    }
  }
  return {true, note + " (dyadic t in [4,1000], thresholds to 1e6 pi^2)"};
}

// ---------------------------------------------------------------------------
// Criterion 12: CLI sweeps are byte-identical across worker counts.

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion_determinism() {
  namespace fs = std::filesystem;
  const fs::path dir =
      fs::temp_directory_path() / ("cuboid_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string base = std::string(CUBOID_SPECTRA_CLI) +
                           " sweep --dim 2 --k-min 1 --k-max 25 --seed 3405691582";
  std::vector<std::string> outputs;
  for (const std::string workers : {"1", "3", "auto", "1"}) {
    const fs::path out = dir / ("sweep_w" + std::to_string(outputs.size()) + ".csv");
    const std::string cmd =
        base + " --workers " + workers + " --out " + out.string();
    const int rc = std::system(cmd.c_str());
    if (rc != 0) {
      return {false, "CLI sweep exited with status " + std::to_string(rc) +
                         " at --workers " + workers};
    }
    outputs.push_back(slurp(out));
  }
  for (std::size_t i = 1; i < outputs.size(); ++i) {
    if (outputs[i] != outputs[0]) {
      return {false, "CSV bytes differ between worker counts (run " +
                         std::to_string(i) + ")"};
    }
  }
  return {true, "4 runs byte-identical (workers 1, 3, auto, 1 rerun; k <= 25, "
                "fixed seed)"};
}

// ---------------------------------------------------------------------------

struct Criterion {
  int id;
  const char* label;
  Outcome (*fn)();
};

const Criterion kCriteria[] = {
    {1, "lattice oracle equivalence", criterion_lattice_oracle},
    {2, "inclusion-exclusion identity", criterion_decomposition},
    {3, "two-sided Polya suites", criterion_polya},
    {4, "appendix exactness + negative control", criterion_appendix},
    {5, "counting/Riesz lemma suites", criterion_lemma_suites},
    {6, "Aizenman-Lieb lift", criterion_aizenman_lieb},
    {7, "Legendre bridge", criterion_legendre},
    {8, "closed-form planar optima", criterion_closed_form_optima},
    {9, "convergence trend", criterion_convergence},
    {10, "stability trend", criterion_stability},
    {11, "two-term residual envelope", criterion_two_term_envelope},
    {12, "worker-count determinism", criterion_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

  int failures = 0, ran = 0;
  for (const Criterion& c : kCriteria) {
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), c.id) == selected.end()) {
      continue;
    }
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.fn();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (!out.pass) ++failures;
    std::printf("[%2d/12] %s %s: %s [%.1fs]\n", c.id,
                out.pass ? "PASS" : "FAIL", c.label, out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("acceptance: %d/%d criteria passed\n", ran - failures, ran);
  return failures == 0 ? 0 : 1;
}
