#include "cuboid_spectra/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "cuboid_spectra/lattice.hpp"
#include "cuboid_spectra/spectrum.hpp"

namespace cuboidspec::asymptotics {
namespace {

constexpr double kPi = M_PI;
constexpr double kPiSq = M_PI * M_PI;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Least squares of y against x; r_squared is 1 for an exactly constant
// series (the constant fits it perfectly).
void least_squares(const std::vector<Point>& pts, FitReport& report) {
  const double m = static_cast<double>(pts.size());
  double mx = 0.0, my = 0.0;
  for (const Point& p : pts) {
    mx += p.x;
    my += p.y;
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const Point& p : pts) {
    sxx += (p.x - mx) * (p.x - mx);
    sxy += (p.x - mx) * (p.y - my);
    syy += (p.y - my) * (p.y - my);
  }
  if (!(sxx > 0.0)) throw invalid_input("fit: degenerate abscissa range");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0.0;
  for (const Point& p : pts) {
    const double e = p.y - (intercept + slope * p.x);
    ss_res += e * e;
  }
  report.sample_count = pts.size();
  report.fitted_exponent = slope;
  report.fitted_constant = std::exp(intercept);
  report.r_squared =
      syy <= 1e-30 ? 1.0 : std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
}

double remainder_at(const Cuboid& r, RemainderMode mode, double t) {
  switch (mode) {
    case RemainderMode::full_lattice: {
      const auto count = lattice::count_points({r, t, lattice::Quadrant::full});
      return static_cast<double>(count) -
             unit_ball_volume(r.dim()) * std::pow(t, r.dim()) * r.measure();
    }
    case RemainderMode::counting_dirichlet: {
      const double lam = kPiSq * t * t;
      const auto count = spectrum::counting_function(r, BoundaryCondition::dirichlet, lam);
      return static_cast<double>(count) -
             two_term_counting(r, BoundaryCondition::dirichlet, lam);
    }
    case RemainderMode::counting_neumann: {
      const double lam = kPiSq * t * t;
      const auto count = spectrum::counting_function(r, BoundaryCondition::neumann, lam);
      return static_cast<double>(count) -
             two_term_counting(r, BoundaryCondition::neumann, lam);
    }
  }
  throw invalid_input("unknown remainder mode");
}

}  // namespace

std::string to_string(RemainderMode mode) {
  switch (mode) {
    case RemainderMode::full_lattice: return "full-lattice";
    case RemainderMode::counting_dirichlet: return "counting-D";
    case RemainderMode::counting_neumann: return "counting-N";
  }
  throw invalid_input("unknown remainder mode");
}

RemainderMode remainder_mode_from_string(const std::string& s) {
  if (s == "full-lattice") return RemainderMode::full_lattice;
  if (s == "counting-D") return RemainderMode::counting_dirichlet;
  if (s == "counting-N") return RemainderMode::counting_neumann;
  throw invalid_input("unknown remainder mode: " + s);
}

std::string to_string(SeriesKind kind) {
  return kind == SeriesKind::delta ? "delta" : "stability";
}

double two_term_counting(const Cuboid& r, BoundaryCondition bc, double threshold) {
  if (!(threshold >= 0.0) || !std::isfinite(threshold)) {
    throw invalid_input("two-term counting: threshold must be >= 0 and finite");
  }
  const int n = r.dim();
  const double volume_term = semiclassical_constant(0.0, n) * r.measure() *
                             std::pow(threshold, 0.5 * n);
  const double surface_term = 0.25 * semiclassical_constant(0.0, n - 1) *
                              perimeter(r) * std::pow(threshold, 0.5 * (n - 1));
  return bc == BoundaryCondition::dirichlet ? volume_term - surface_term
                                            : volume_term + surface_term;
}

double two_term_eigenvalue(const Cuboid& r, BoundaryCondition bc, std::int64_t k) {
  if (k < 1) throw invalid_input("two-term eigenvalue: k must be >= 1");
  if (!r.is_unit_measure(1e-9)) {
    throw invalid_input("two-term eigenvalue requires a unit-measure cuboid");
  }
  const int n = r.dim();
  const double kk = static_cast<double>(k);
  const double g = std::exp(std::lgamma(0.5 * n + 1.0));
  const double leading = 4.0 * kPi * std::pow(g, 2.0 / n) * std::pow(kk, 2.0 / n);
  const double second = 2.0 * kPi * std::pow(g, 1.0 + 1.0 / n) /
                        (n * std::exp(std::lgamma(0.5 * (n + 1)))) * perimeter(r) *
                        std::pow(kk, 1.0 / n);
  return bc == BoundaryCondition::dirichlet ? leading + second : leading - second;
}

FitReport fit_remainder_exponent(const Cuboid& r, RemainderMode mode,
                                 const std::vector<double>& t_grid,
                                 const ThetaTable& thetas) {
  if (r.dim() < 2) throw invalid_input("remainder fit requires dimension >= 2");
  if (t_grid.empty()) throw invalid_input("remainder fit: empty grid");
  std::vector<double> grid = t_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (!(grid.front() > 0.0) || !std::isfinite(grid.back())) {
    throw invalid_input("remainder fit: grid values must be positive and finite");
  }

  // Block maxima keyed by floor(log2 t).
  struct BlockMax {
    double magnitude = 0.0;
    double t = 0.0;
  };
  std::map<int, BlockMax> blocks;
  for (double t : grid) {
    const double magnitude = std::abs(remainder_at(r, mode, t));
    BlockMax& slot = blocks[static_cast<int>(std::floor(std::log2(t)))];
    if (magnitude > slot.magnitude) slot = {magnitude, t};
  }

  FitReport report;
  std::vector<Point> pts;
  for (const auto& [index, block] : blocks) {
    if (block.magnitude <= 0.0) {
      ++report.zeros_dropped;
      continue;
    }
    const double x = mode == RemainderMode::full_lattice
                         ? std::log(block.t)
                         : std::log(kPiSq * block.t * block.t);
    pts.push_back({x, std::log(block.magnitude)});
  }
  if (pts.size() < 3) {
    throw invalid_input("remainder fit: insufficient samples, need >= 3 dyadic blocks");
  }

  const double theta = thetas.theta(r.dim());
  report.reference_exponent =
      mode == RemainderMode::full_lattice ? theta : 0.5 * theta;
  std::ostringstream id;
  id << "remainder:" << to_string(mode) << ":n=" << r.dim();
  report.series_id = id.str();
  std::ostringstream window;
  window << "t in [" << grid.front() << ", " << grid.back() << "], "
         << pts.size() << " dyadic blocks from " << grid.size() << " samples";
  report.window = window.str();
  least_squares(pts, report);
  if (pts.size() < 8) report.note = "fewer than 8 block maxima; fit is indicative only";
  return report;
}

FitReport fit_convergence_rate(const std::vector<std::pair<double, double>>& series,
                               SeriesKind kind, int dim, const ThetaTable& thetas,
                               double window_fraction) {
  if (series.empty()) throw invalid_input("convergence fit: empty series");
  if (!(window_fraction > 0.0) || window_fraction > 1.0) {
    throw invalid_input("convergence fit: window fraction must be in (0, 1]");
  }
  double k_min = series.front().first;
  double k_max = series.front().first;
  for (const auto& [k, y] : series) {
    if (!(k > 0.0) || !std::isfinite(k)) {
      throw invalid_input("convergence fit: indices must be positive");
    }
    if (!(y >= 0.0) || !std::isfinite(y)) {
      throw invalid_input("convergence fit: ordinates must be >= 0");
    }
    k_min = std::min(k_min, k);
    k_max = std::max(k_max, k);
  }
  const double k_lo = k_max - window_fraction * (k_max - k_min);

  FitReport report;
  const double theta = thetas.theta(dim);
  report.reference_exponent = kind == SeriesKind::delta
                                  ? (theta - (dim - 1)) / (2.0 * dim)
                                  : (theta - (dim - 2)) / dim;
  std::ostringstream id;
  id << to_string(kind) << ":n=" << dim;
  report.series_id = id.str();

  std::vector<Point> pts;
  std::size_t in_window = 0;
  for (const auto& [k, y] : series) {
    if (k < k_lo) continue;
    ++in_window;
    if (y == 0.0) {
      ++report.zeros_dropped;
      continue;
    }
    pts.push_back({std::log(k), std::log(y)});
  }
  std::ostringstream window;
  window << "k in [" << k_lo << ", " << k_max << "], " << pts.size()
         << " positive of " << in_window << " points";
  report.window = window.str();

  if (pts.empty()) {
    if (in_window == 0) throw invalid_input("convergence fit: empty window");
    report.degenerate = true;
    report.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
    report.fitted_constant = 0.0;
    report.note = "cube always optimal on window";
    return report;
  }
  if (pts.size() < 8) {
    throw invalid_input("convergence fit: need >= 8 positive ordinates in window");
  }
  least_squares(pts, report);
  return report;
}

std::vector<double> dyadic_grid(double t_min, double t_max, int points_per_block) {
  if (!(t_min > 0.0) || !(t_max > t_min) || points_per_block < 1) {
    throw invalid_input("dyadic grid: need 0 < t_min < t_max and points per block >= 1");
  }
  const double blocks = std::log2(t_max / t_min);
  const int count = std::max(2, static_cast<int>(std::ceil(blocks * points_per_block)) + 1);
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count));
  const double step = std::log(t_max / t_min) / (count - 1);
  for (int i = 0; i < count; ++i) grid.push_back(t_min * std::exp(step * i));
  grid.back() = t_max;
  return grid;
}

}  // namespace cuboidspec::asymptotics
