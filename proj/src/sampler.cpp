#include "pnrthresh/sampler.hpp"

#include <cmath>

namespace pnrthresh {
namespace {

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Hoermann (1993), "The transformed rejection method for generating Poisson
// random variables". Valid for mean >= 10.
std::uint64_t sample_poisson_ptrs(double mean, SplitMix64& rng) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);

  while (true) {
    const double u = rng.uniform_open0() - 0.5;
    const double v = rng.uniform_open0();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
    const double rhs = -mean + k * loglam - detail::log_factorial(static_cast<std::uint32_t>(k));
    if (lhs <= rhs) return static_cast<std::uint64_t>(k);
  }
}

}  // namespace

std::uint64_t draw_key(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t draw_index,
                       DrawComponent component) noexcept {
  std::uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ULL);
  h = mix64(h ^ (stream_id + 0x632be59bd9b4e019ULL));
  h = mix64(h ^ (draw_index + 0x85157af5d3b7a0c1ULL));
  h = mix64(h ^ (static_cast<std::uint64_t>(component) + 0x2545f4914f6cdd1dULL));
  return h;
}

std::uint64_t sample_thermal(double n_th_mean, SplitMix64& rng) {
  if (n_th_mean <= 0.0) return 0;
  // P(n >= k) = x^k, so n = floor(ln U / ln x) for U uniform on (0, 1].
  const double log_x = std::log(n_th_mean) - std::log1p(n_th_mean);
  return static_cast<std::uint64_t>(std::floor(std::log(rng.uniform_open0()) / log_x));
}

std::uint64_t sample_poisson(double n_p_mean, SplitMix64& rng) {
  if (n_p_mean <= 0.0) return 0;
  if (n_p_mean >= kLogSpaceThreshold) return sample_poisson_ptrs(n_p_mean, rng);
  double u = rng.uniform_open0();
  double p = std::exp(-n_p_mean);
  std::uint64_t n = 0;
  // Inversion; the residual guard absorbs rounding in the cumulative sum.
  while (u > p && p > 0.0) {
    u -= p;
    ++n;
    p *= n_p_mean / static_cast<double>(n);
  }
  return n;
}

std::uint64_t sample_count(const CountSampleStream& stream, std::uint64_t draw_index) {
  auto component_rng = [&](DrawComponent c) {
    return SplitMix64(draw_key(stream.seed, stream.stream_id, draw_index, c));
  };
  std::uint64_t count = 0;
  if (stream.kind != SourceKind::Poisson) {
    auto rng = component_rng(DrawComponent::Thermal);
    count += sample_thermal(stream.params.n_th_mean(), rng);
  }
  if (stream.kind != SourceKind::Thermal) {
    auto rng = component_rng(DrawComponent::Poisson);
    count += sample_poisson(stream.params.n_p_mean(), rng);
  }
  return count;
}

}  // namespace pnrthresh
