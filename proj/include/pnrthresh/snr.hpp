#pragma once

// Signal-to-noise ratios of intensity detection and photon-number threshold
// detection for a coherent signal in single-mode thermal noise, and the
// analyses built on their ratio: sweeps, the best signal level per threshold,
// and the boundary of the region where thresholding wins.

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "pnrthresh/grid.hpp"
#include "pnrthresh/photon_stats.hpp"

namespace pnrthresh {

/// Tunables for the searches in this module. Defaults reproduce the
/// published tables.
struct AnalysisConfig {
  /// Truncation of infinite Poisson tails.
  double truncation_tolerance = kTruncationTolerance;

  /// find_optimum: log-spaced bracket, then golden section in ln(n_p).
  double optimum_lo = 1e-3;
  double optimum_hi = 1e3;
  std::size_t optimum_points = 200;
  double optimum_rel_tolerance = 1e-6;

  /// find_boundary: log-spaced sign-change scan, then bisection in n_p.
  /// Below ~1e-6 the ratio differs from 1 by less than rounding, so the scan
  /// starts at 1e-3.
  double boundary_lo = 1e-3;
  double boundary_hi = 1e5;
  std::size_t boundary_points = 400;
  double boundary_abs_tolerance = 1e-6;
  /// Contract on |ratio - 1| at every reported boundary point.
  double boundary_ratio_tolerance = 1e-5;
};

/// (n_p + n_th) / n_th. Throws DomainError when n_th == 0.
double classical_snr(const SourceParams& params);

/// Probability of reaching N photons with signal present, divided by the
/// probability with thermal light alone (x^N).
double quantum_snr(const SourceParams& params, std::uint32_t threshold_n);

double snr_ratio(const SourceParams& params, std::uint32_t threshold_n);

/// d SNR_q / d n_p = (1/x - 1) e^{-n_p} sum_{m<N} (n_p/x)^m / m!. Strictly
/// positive whenever n_th > 0.
double quantum_snr_derivative(const SourceParams& params, std::uint32_t threshold_n);

/// SNR_q(N+1) - SNR_q(N) = (1 - x) / x^{N+1} * sum_{n>=N} p_p(n+1).
double threshold_gap(const SourceParams& params, std::uint32_t threshold_n,
                     const AnalysisConfig& config = {});

struct SnrReport {
  SourceParams params;
  double classical = 0.0;
  std::map<std::uint32_t, double> quantum;
  std::map<std::uint32_t, double> ratio;
};

SnrReport make_snr_report(const SourceParams& params, std::span<const std::uint32_t> thresholds);

struct SweepRow {
  double n_p_mean;
  std::uint32_t threshold_n;
  double ratio;
};

/// Rows grouped by threshold (in the order given), then by grid point.
std::vector<SweepRow> sweep_ratio(double n_th_mean, std::span<const std::uint32_t> thresholds,
                                  const Grid& n_p_grid);

struct OptimumPoint {
  std::uint32_t threshold_n = 0;
  double n_th_mean = 0.0;
  double best_n_p_mean = 0.0;
  double best_ratio = 0.0;
};

/// Maximizes snr_ratio over n_p. Throws SearchError when the bracket scan
/// peaks at an end of the search range.
OptimumPoint find_optimum(double n_th_mean, std::uint32_t threshold_n,
                          const AnalysisConfig& config = {});

struct BoundaryPoint {
  double n_th_mean;
  double n_p_mean;
  double ratio;
  /// Sign changes of ratio - 1 seen by the scan; the largest is reported.
  std::size_t crossings;
};

/// Locus of snr_ratio == 1. Thresholding wins below the curve.
struct BoundaryCurve {
  std::uint32_t threshold_n = 0;
  std::vector<BoundaryPoint> points;
  /// Grid values of n_th with no sign change inside the scan range.
  std::vector<double> no_boundary;
  double tolerance = 0.0;
};

BoundaryCurve find_boundary(std::uint32_t threshold_n, const Grid& n_th_grid,
                            const AnalysisConfig& config = {});

/// Trapezoid area under the curve over its reported points.
double boundary_area(const BoundaryCurve& curve);

/// n_th of the point of maximum discrete curvature, measured in linear
/// (n_th, n_p) axes. Needs at least three points.
double boundary_knee(const BoundaryCurve& curve);

}  // namespace pnrthresh
