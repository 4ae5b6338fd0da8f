#include "pnrthresh/snr.hpp"

#include <cmath>
#include <string>

#include "pnrthresh/errors.hpp"
#include "pnrthresh/search.hpp"

namespace pnrthresh {
namespace {

void require_noise(double n_th_mean) {
  if (!(n_th_mean > 0.0)) {
    throw DomainError("SNR undefined without thermal noise (n_th must be > 0)");
  }
}

void require_threshold(std::uint32_t threshold_n) {
  if (threshold_n < 1) throw DomainError("threshold must be >= 1");
}

// sum_{n>=first} p_p(n), truncated once the geometric bound on the remainder
// drops below rel_tolerance of the partial sum.
double truncated_poisson_tail(std::uint32_t first, double mean, double rel_tolerance) {
  if (mean == 0.0) return first == 0 ? 1.0 : 0.0;
  double term = poisson_pmf(first, mean);
  double sum = 0.0;
  for (double n = first;; n += 1.0) {
    sum += term;
    term *= mean / (n + 1.0);
    if (n + 2.0 > mean) {
      const double remainder_bound = term / (1.0 - mean / (n + 2.0));
      if (remainder_bound <= rel_tolerance * sum) break;
    }
  }
  return sum;
}

}  // namespace

double classical_snr(const SourceParams& params) {
  require_noise(params.n_th_mean());
  return (params.n_p_mean() + params.n_th_mean()) / params.n_th_mean();
}

double quantum_snr(const SourceParams& params, std::uint32_t threshold_n) {
  require_noise(params.n_th_mean());
  require_threshold(threshold_n);
  const double np = params.n_p_mean();
  const double x = params.x();
  // Numerator 1 - [Gamma(np,N) - Gamma(np/x,N) e^{np/x-np} x^N]/(N-1)!, split
  // so that neither the leading 1 - (...) nor e^{np/x} is formed.
  return poisson_tail(threshold_n, np) / std::pow(x, threshold_n) +
         detail::scaled_gamma_sum(np / x, np, threshold_n);
}

double snr_ratio(const SourceParams& params, std::uint32_t threshold_n) {
  return quantum_snr(params, threshold_n) / classical_snr(params);
}

double quantum_snr_derivative(const SourceParams& params, std::uint32_t threshold_n) {
  require_noise(params.n_th_mean());
  require_threshold(threshold_n);
  const double np = params.n_p_mean();
  const double x = params.x();
  return (1.0 / x - 1.0) * detail::scaled_gamma_sum(np / x, np, threshold_n);
}

double threshold_gap(const SourceParams& params, std::uint32_t threshold_n,
                     const AnalysisConfig& config) {
  require_noise(params.n_th_mean());
  require_threshold(threshold_n);
  const double x = params.x();
  const double tail =
      truncated_poisson_tail(threshold_n + 1, params.n_p_mean(), config.truncation_tolerance);
  return (1.0 - x) / std::pow(x, threshold_n + 1) * tail;
}

SnrReport make_snr_report(const SourceParams& params, std::span<const std::uint32_t> thresholds) {
  SnrReport report;
  report.params = params;
  report.classical = classical_snr(params);
  for (auto n : thresholds) {
    const double q = quantum_snr(params, n);
    report.quantum[n] = q;
    report.ratio[n] = q / report.classical;
  }
  return report;
}

std::vector<SweepRow> sweep_ratio(double n_th_mean, std::span<const std::uint32_t> thresholds,
                                  const Grid& n_p_grid) {
  require_noise(n_th_mean);
  std::vector<SweepRow> rows;
  rows.reserve(thresholds.size() * n_p_grid.size());
  for (auto n : thresholds) {
    for (double np : n_p_grid.values()) {
      rows.push_back({np, n, snr_ratio(SourceParams(np, n_th_mean), n)});
    }
  }
  return rows;
}

OptimumPoint find_optimum(double n_th_mean, std::uint32_t threshold_n,
                          const AnalysisConfig& config) {
  require_noise(n_th_mean);
  require_threshold(threshold_n);
  auto ratio_at = [&](double np) { return snr_ratio(SourceParams(np, n_th_mean), threshold_n); };

  const auto grid = Grid::log(config.optimum_lo, config.optimum_hi, config.optimum_points);
  const auto& g = grid.values();
  std::size_t best = 0;
  double best_value = ratio_at(g[0]);
  for (std::size_t i = 1; i < g.size(); ++i) {
    const double v = ratio_at(g[i]);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  if (best == 0 || best + 1 == g.size()) {
    throw SearchError("no interior maximum of the SNR ratio in [" +
                      std::to_string(config.optimum_lo) + ", " +
                      std::to_string(config.optimum_hi) + "] for N = " +
                      std::to_string(threshold_n));
  }

  // Golden section in ln(n_p) so the bracket width is a relative tolerance.
  const auto peak = golden_section_maximize(
      [&](double log_np) { return ratio_at(std::exp(log_np)); }, std::log(g[best - 1]),
      std::log(g[best + 1]), config.optimum_rel_tolerance);
  OptimumPoint out{threshold_n, n_th_mean, std::exp(peak.x), peak.fx};
  if (best_value > out.best_ratio) {
    out.best_n_p_mean = g[best];
    out.best_ratio = best_value;
  }
  return out;
}

BoundaryCurve find_boundary(std::uint32_t threshold_n, const Grid& n_th_grid,
                            const AnalysisConfig& config) {
  require_threshold(threshold_n);
  BoundaryCurve curve;
  curve.threshold_n = threshold_n;
  curve.tolerance = config.boundary_ratio_tolerance;

  const auto scan = Grid::log(config.boundary_lo, config.boundary_hi, config.boundary_points);
  const auto& g = scan.values();
  std::vector<double> excess(g.size());

  for (double n_th : n_th_grid.values()) {
    require_noise(n_th);
    auto excess_at = [&](double np) {
      return snr_ratio(SourceParams(np, n_th), threshold_n) - 1.0;
    };
    for (std::size_t i = 0; i < g.size(); ++i) excess[i] = excess_at(g[i]);

    std::size_t crossings = 0;
    std::size_t last_downward = g.size();
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
      const bool above = excess[i] > 0.0;
      if (above != (excess[i + 1] > 0.0)) {
        ++crossings;
        // Only a crossing from above bounds an advantage region below it.
        if (above) last_downward = i;
      }
    }
    if (last_downward == g.size()) {
      curve.no_boundary.push_back(n_th);
      continue;
    }
    const auto root = bisect_root(excess_at, g[last_downward], g[last_downward + 1],
                                  config.boundary_abs_tolerance);
    curve.points.push_back({n_th, root.x, root.fx + 1.0, crossings});
  }
  return curve;
}

double boundary_area(const BoundaryCurve& curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    area += 0.5 * (a.n_p_mean + b.n_p_mean) * (b.n_th_mean - a.n_th_mean);
  }
  return area;
}

double boundary_knee(const BoundaryCurve& curve) {
  const auto& pts = curve.points;
  if (pts.size() < 3) throw DomainError("knee needs at least three boundary points");
  double best_curvature = -1.0;
  double knee = pts[1].n_th_mean;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const double ax = pts[i - 1].n_th_mean, ay = pts[i - 1].n_p_mean;
    const double bx = pts[i].n_th_mean, by = pts[i].n_p_mean;
    const double cx = pts[i + 1].n_th_mean, cy = pts[i + 1].n_p_mean;
    // Menger curvature: 4 * triangle area / product of side lengths.
    const double cross = std::fabs((bx - ax) * (cy - ay) - (by - ay) * (cx - ax));
    const double sides = std::hypot(bx - ax, by - ay) * std::hypot(cx - bx, cy - by) *
                         std::hypot(cx - ax, cy - ay);
    const double curvature = sides > 0.0 ? 2.0 * cross / sides : 0.0;
    if (curvature > best_curvature) {
      best_curvature = curvature;
      knee = bx;
    }
  }
  return knee;
}

}  // namespace pnrthresh
