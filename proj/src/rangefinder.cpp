#include "pnrthresh/rangefinder.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

#include "pnrthresh/errors.hpp"
#include "pnrthresh/photon_stats.hpp"
#include "pnrthresh/sampler.hpp"
#include "pnrthresh/snr.hpp"

namespace pnrthresh {

void SimConfig::validate() const {
  if (num_bins < 1) throw ConfigError("num_bins must be >= 1", "num_bins");
  if (!std::isfinite(noise_mean) || noise_mean < 0.0) {
    throw ConfigError("noise_mean must be finite and >= 0", "noise_mean");
  }
  std::set<std::uint32_t> seen_bins;
  for (const auto& t : targets) {
    if (t.bin >= num_bins) {
      throw ConfigError("target bin " + std::to_string(t.bin) + " outside 0.." +
                        std::to_string(num_bins - 1),
                        "targets");
    }
    if (!seen_bins.insert(t.bin).second) {
      throw ConfigError("duplicate target bin " + std::to_string(t.bin), "targets");
    }
    if (!std::isfinite(t.signal_mean) || !(t.signal_mean > 0.0)) {
      throw ConfigError("target signal mean must be finite and > 0 (bin " +
                        std::to_string(t.bin) + ")",
                        "targets");
    }
  }
  if (seen_bins.size() == num_bins) {
    throw ConfigError("every bin holds a target; no noise bins left for normalization",
                      "targets");
  }
  if (thresholds.empty()) throw ConfigError("at least one threshold is required", "thresholds");
  std::set<std::uint32_t> seen_thresholds;
  for (auto n : thresholds) {
    if (n < 1) throw ConfigError("thresholds must be >= 1", "thresholds");
    if (!seen_thresholds.insert(n).second) {
      throw ConfigError("duplicate threshold " + std::to_string(n), "thresholds");
    }
  }
  if (repetitions < 1) throw ConfigError("repetitions must be >= 1", "repetitions");
}

std::vector<std::uint32_t> SimConfig::noise_bins() const {
  std::vector<bool> is_target(num_bins, false);
  for (const auto& t : targets) {
    if (t.bin < num_bins) is_target[t.bin] = true;
  }
  std::vector<std::uint32_t> out;
  for (std::uint32_t b = 0; b < num_bins; ++b) {
    if (!is_target[b]) out.push_back(b);
  }
  return out;
}

SimConfig four_target_config(std::uint64_t repetitions, std::uint64_t seed) {
  SimConfig c;
  c.num_bins = 50;
  c.noise_mean = 1.0;
  c.targets = {{10, 0.5}, {20, 1.0}, {30, 3.0}, {40, 10.0}};
  c.thresholds = {2, 5};
  c.repetitions = repetitions;
  c.seed = seed;
  return c;
}

std::uint64_t bin_stream_id(std::uint32_t bin) noexcept { return bin; }

SimResult simulate_raw(const SimConfig& config, unsigned threads) {
  config.validate();

  SimResult result;
  result.config = config;
  result.noise_bins = config.noise_bins();
  const std::size_t bins = config.num_bins;
  result.intensity_raw.assign(bins, 0);
  result.intensity_sq_raw.assign(bins, 0);
  for (auto n : config.thresholds) result.threshold_raw[n].assign(bins, 0);

  std::vector<double> signal(bins, 0.0);
  for (const auto& t : config.targets) signal[t.bin] = t.signal_mean;

  std::vector<std::uint32_t> thresholds = config.thresholds;
  std::sort(thresholds.begin(), thresholds.end());
  std::vector<std::vector<std::uint64_t>*> counters;
  for (auto n : thresholds) counters.push_back(&result.threshold_raw[n]);

  // Each bin is owned by exactly one worker, so writes never overlap.
  auto run_bin = [&](std::size_t b) {
    CountSampleStream stream;
    stream.seed = config.seed;
    stream.stream_id = bin_stream_id(static_cast<std::uint32_t>(b));
    stream.kind = signal[b] > 0.0 ? SourceKind::Mixed : SourceKind::Thermal;
    stream.params = SourceParams(signal[b], config.noise_mean);

    std::uint64_t sum = 0;
    std::uint64_t sum_sq = 0;
    std::vector<std::uint64_t> hits(thresholds.size(), 0);
    for (std::uint64_t r = 0; r < config.repetitions; ++r) {
      const std::uint64_t c = sample_count(stream, r);
      sum += c;
      sum_sq += c * c;
      for (std::size_t k = 0; k < thresholds.size() && c >= thresholds[k]; ++k) ++hits[k];
    }
    result.intensity_raw[b] = sum;
    result.intensity_sq_raw[b] = sum_sq;
    for (std::size_t k = 0; k < thresholds.size(); ++k) (*counters[k])[b] = hits[k];
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(bins)));
  if (workers == 1) {
    for (std::size_t b = 0; b < bins; ++b) run_bin(b);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t b = w; b < bins; b += workers) run_bin(b);
      });
    }
  }
  return result;
}

std::vector<double> normalize(std::span<const double> values,
                              std::span<const std::uint32_t> noise_bins) {
  if (noise_bins.empty()) throw DomainError("normalization needs at least one noise bin");
  double noise_sum = 0.0;
  for (auto b : noise_bins) {
    if (b >= values.size()) throw DomainError("noise bin index out of range");
    noise_sum += values[b];
  }
  const double noise_average = noise_sum / static_cast<double>(noise_bins.size());
  if (!(noise_average > 0.0)) {
    throw DegenerateNoiseError("noise-bin average is zero; channel cannot be normalized");
  }
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(),
                 [&](double v) { return v / noise_average; });
  return out;
}

std::vector<double> normalize(std::span<const std::uint64_t> values,
                              std::span<const std::uint32_t> noise_bins) {
  std::vector<double> as_real(values.begin(), values.end());
  return normalize(std::span<const double>(as_real), noise_bins);
}

SimResult run_simulation(const SimConfig& config, unsigned threads) {
  SimResult result = simulate_raw(config, threads);
  try {
    result.intensity_norm =
        normalize(std::span<const std::uint64_t>(result.intensity_raw), result.noise_bins);
  } catch (const DegenerateNoiseError&) {
    throw DegenerateNoiseError("intensity channel has no noise photons to normalize by");
  }
  for (const auto& [n, raw] : result.threshold_raw) {
    try {
      result.threshold_norm[n] =
          normalize(std::span<const std::uint64_t>(raw), result.noise_bins);
    } catch (const DegenerateNoiseError&) {
      throw DegenerateNoiseError("threshold N=" + std::to_string(n) +
                                 " channel has no noise-bin detections; increase repetitions");
    }
  }
  return result;
}

namespace {

double noise_average(const std::vector<std::uint64_t>& raw,
                     const std::vector<std::uint32_t>& noise_bins) {
  double s = 0.0;
  for (auto b : noise_bins) s += static_cast<double>(raw[b]);
  return s / static_cast<double>(noise_bins.size());
}

}  // namespace

RatioEstimate estimate_ratio(const SimResult& result, std::uint32_t bin_index,
                             std::uint32_t threshold_n) {
  if (bin_index >= result.intensity_raw.size()) {
    throw DomainError("bin index " + std::to_string(bin_index) + " out of range");
  }
  const auto raw_it = result.threshold_raw.find(threshold_n);
  const auto norm_it = result.threshold_norm.find(threshold_n);
  if (raw_it == result.threshold_raw.end()) {
    throw DomainError("threshold " + std::to_string(threshold_n) + " was not simulated");
  }
  if (norm_it == result.threshold_norm.end() || result.intensity_norm.empty()) {
    throw DomainError("simulation result is not normalized");
  }

  RatioEstimate est;
  est.bin_index = bin_index;
  est.threshold_n = threshold_n;
  est.threshold_norm = norm_it->second[bin_index];
  est.intensity_norm = result.intensity_norm[bin_index];
  if (!(est.intensity_norm > 0.0)) {
    throw DomainError("ratio undefined: intensity is zero at bin " + std::to_string(bin_index));
  }
  est.ratio = est.threshold_norm / est.intensity_norm;

  const double reps = static_cast<double>(result.config.repetitions);

  // Threshold channel: binomial count k out of reps.
  const double k = static_cast<double>(raw_it->second[bin_index]);
  est.threshold_se =
      std::sqrt(k * (reps - k) / reps) / noise_average(raw_it->second, result.noise_bins);

  // Intensity channel: sample variance of the per-repetition count.
  const double sum = static_cast<double>(result.intensity_raw[bin_index]);
  const double sum_sq = static_cast<double>(result.intensity_sq_raw[bin_index]);
  const double var = reps > 1.0 ? std::max(0.0, (sum_sq - sum * sum / reps) / (reps - 1.0)) : 0.0;
  est.intensity_se =
      std::sqrt(var * reps) / noise_average(result.intensity_raw, result.noise_bins);

  if (est.threshold_norm > 0.0) {
    est.ratio_se = est.ratio * std::hypot(est.threshold_se / est.threshold_norm,
                                          est.intensity_se / est.intensity_norm);
  }
  return est;
}

ExpectedResult expected_result(const SimConfig& config) {
  config.validate();
  if (!(config.noise_mean > 0.0)) {
    throw DomainError("expected result undefined without thermal noise (noise_mean must be > 0)");
  }
  ExpectedResult out;
  out.intensity.assign(config.num_bins, 1.0);
  for (auto n : config.thresholds) out.threshold[n].assign(config.num_bins, 1.0);
  for (const auto& t : config.targets) {
    const SourceParams params(t.signal_mean, config.noise_mean);
    out.intensity[t.bin] = classical_snr(params);
    for (auto n : config.thresholds) out.threshold[n][t.bin] = quantum_snr(params, n);
  }
  return out;
}

}  // namespace pnrthresh
