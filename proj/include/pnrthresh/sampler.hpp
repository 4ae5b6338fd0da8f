#pragma once

// Counter-based photon-count sampling. A draw is a pure function of
// (seed, stream_id, draw_index, source), so streams can be shared across
// threads or partitioned freely without changing any realization.

#include <cstdint>
#include <limits>

#include "pnrthresh/photon_stats.hpp"

namespace pnrthresh {

/// SplitMix64 bit generator. Satisfies UniformRandomBitGenerator.
class SplitMix64 {
public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in (0, 1]; 53 random bits.
  double uniform_open0() noexcept {
    return (static_cast<double>((*this)() >> 11) + 1.0) * 0x1.0p-53;
  }

private:
  std::uint64_t state_;
};

/// Independent sub-draws of one logical draw. Thermal and Poisson counts at
/// the same coordinates use different components, so a mixed draw equals
/// the thermal draw plus the Poisson draw at the same coordinates.
enum class DrawComponent : std::uint64_t { Thermal = 0, Poisson = 1 };

/// Mixes the draw coordinates into a generator seed.
std::uint64_t draw_key(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t draw_index,
                       DrawComponent component) noexcept;

struct CountSampleStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  SourceKind kind = SourceKind::Thermal;
  SourceParams params;
};

/// Geometric count with P(n) = x^n (1 - x), by inversion.
std::uint64_t sample_thermal(double n_th_mean, SplitMix64& rng);

/// Exact Poisson count: sequential inversion below mean 30, PTRS
/// transformed rejection above.
std::uint64_t sample_poisson(double n_p_mean, SplitMix64& rng);

std::uint64_t sample_count(const CountSampleStream& stream, std::uint64_t draw_index);

}  // namespace pnrthresh
