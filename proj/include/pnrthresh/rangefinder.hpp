#pragma once

// Time-binned Monte Carlo of a multi-target rangefinder. Every repetition
// fills each time bin with single-mode thermal noise photons; target bins
// add coherent signal photons. Two read-outs are accumulated per bin: the
// photon count itself (intensity detection) and, per threshold N, the number
// of repetitions whose count reached N (threshold detection).

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace pnrthresh {

struct Target {
  std::uint32_t bin = 0;  // 0-based
  double signal_mean = 0.0;

  friend bool operator==(const Target&, const Target&) = default;
};

struct SimConfig {
  std::uint32_t num_bins = 50;
  double noise_mean = 1.0;
  std::vector<Target> targets;
  std::vector<std::uint32_t> thresholds{2, 5};
  std::uint64_t repetitions = 0;
  std::uint64_t seed = 0;

  /// Throws ConfigError on the first violated constraint.
  void validate() const;

  /// Bins not occupied by a target, ascending.
  std::vector<std::uint32_t> noise_bins() const;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// 50 bins, n_th = 1, targets of mean 0.5, 1, 3, 10 at bins 10, 20, 30, 40,
/// thresholds 2 and 5.
SimConfig four_target_config(std::uint64_t repetitions, std::uint64_t seed);

struct SimResult {
  SimConfig config;
  std::vector<std::uint32_t> noise_bins;

  std::vector<std::uint64_t> intensity_raw;
  /// Per-bin sum of squared counts, for the intensity standard error.
  std::vector<std::uint64_t> intensity_sq_raw;
  std::map<std::uint32_t, std::vector<std::uint64_t>> threshold_raw;

  /// Raw arrays divided by their noise-bin average. Empty until normalized.
  std::vector<double> intensity_norm;
  std::map<std::uint32_t, std::vector<double>> threshold_norm;
};

/// Stream identity of one bin's draws. Noise and signal for the same bin use
/// the same stream id and differ in draw component, so the noise realization
/// of a bin does not depend on which bins hold targets.
std::uint64_t bin_stream_id(std::uint32_t bin) noexcept;

/// Draws and accumulates raw arrays only. `threads` > 1 splits bins across
/// worker threads; the result is identical for any thread count.
SimResult simulate_raw(const SimConfig& config, unsigned threads = 1);

/// simulate_raw followed by normalization of every channel. Throws
/// DegenerateNoiseError when a channel has no noise-bin counts.
SimResult run_simulation(const SimConfig& config, unsigned threads = 1);

/// Divides every value by the mean of `values` over `noise_bins`.
std::vector<double> normalize(std::span<const double> values,
                              std::span<const std::uint32_t> noise_bins);
std::vector<double> normalize(std::span<const std::uint64_t> values,
                              std::span<const std::uint32_t> noise_bins);

struct RatioEstimate {
  std::uint32_t bin_index = 0;
  std::uint32_t threshold_n = 0;
  double threshold_norm = 0.0;
  double intensity_norm = 0.0;
  double ratio = 0.0;
  /// Monte Carlo standard errors of the normalized channel values (noise
  /// normalizer treated as exact) and of the ratio, by the delta method.
  double threshold_se = 0.0;
  double intensity_se = 0.0;
  double ratio_se = 0.0;
};

RatioEstimate estimate_ratio(const SimResult& result, std::uint32_t bin_index,
                             std::uint32_t threshold_n);

/// Infinite-repetition limit of the normalized arrays.
struct ExpectedResult {
  std::vector<double> intensity;
  std::map<std::uint32_t, std::vector<double>> threshold;
};

ExpectedResult expected_result(const SimConfig& config);

}  // namespace pnrthresh
