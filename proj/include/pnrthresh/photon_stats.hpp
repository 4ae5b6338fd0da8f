#pragma once

// Photon-number distributions of single-mode thermal light, coherent light,
// and their mixture, plus the tail probabilities used by threshold detection.

#include <cstdint>
#include <string_view>
#include <vector>

namespace pnrthresh {

/// Mean photon numbers of the coherent signal and the thermal background.
/// `x` is the thermal ratio n_th / (n_th + 1); the thermal tail above a
/// threshold N is x^N.
class SourceParams {
public:
  SourceParams() = default;
  /// Throws DomainError for negative or non-finite means.
  SourceParams(double n_p_mean, double n_th_mean);

  double n_p_mean() const noexcept { return n_p_mean_; }
  double n_th_mean() const noexcept { return n_th_mean_; }
  double x() const noexcept { return x_; }

  friend bool operator==(const SourceParams&, const SourceParams&) = default;

private:
  double n_p_mean_ = 0.0;
  double n_th_mean_ = 0.0;
  double x_ = 0.0;
};

enum class SourceKind { Thermal, Poisson, Mixed };

std::string_view to_string(SourceKind kind);
/// Accepts "thermal", "poisson", "mixed". Throws DomainError otherwise.
SourceKind parse_source_kind(std::string_view name);

/// Truncated probability mass function. probs[n] = P(n) for n = 0..n_max;
/// residual is the mass beyond n_max.
struct PhotonPmf {
  SourceKind kind = SourceKind::Thermal;
  SourceParams params;
  std::vector<double> probs;
  double residual = 0.0;

  std::size_t n_max() const noexcept { return probs.empty() ? 0 : probs.size() - 1; }
};

/// Default truncation tolerance for PMFs and infinite tails.
inline constexpr double kTruncationTolerance = 1e-12;

/// Poisson terms switch from the direct recurrence to log-space evaluation
/// when either the mean or n exceeds this.
inline constexpr double kLogSpaceThreshold = 30.0;

double thermal_pmf(std::uint32_t n, double n_th_mean);
double poisson_pmf(std::uint32_t n, double n_p_mean);

/// Regularized upper incomplete gamma for integer shape k >= 1:
/// Gamma(y, k) / (k-1)! = e^-y * sum_{m<k} y^m / m!, as an exact finite sum.
double incomplete_gamma_ratio(double y, std::uint32_t k);

/// Coherent-plus-thermal photon statistics, the convolution of the Poisson
/// and geometric laws. Falls back to the pure Poisson law when n_th == 0.
double mixed_pmf(std::uint32_t n, const SourceParams& params);

double pmf(SourceKind kind, std::uint32_t n, const SourceParams& params);

/// Smallest truncation with residual <= tolerance. The search is capped at
/// n_max = 10 * (n_p + n_th) + 200; hitting the cap throws SearchError.
PhotonPmf build_pmf(SourceKind kind, const SourceParams& params,
                    double tolerance = kTruncationTolerance);

/// P(n >= N) for thermal light: x^N.
double thermal_tail(std::uint32_t threshold_n, double n_th_mean);

/// P(n >= N) for coherent light, summed on whichever side avoids
/// cancellation.
double poisson_tail(std::uint32_t threshold_n, double n_p_mean);

/// P(n >= N) for the mixture. Uses
///   1 - sum_{m<N} (1 - x^{N-m}) p_p(m)
///     = PoissonTail(N) + x^N Gamma(n_p/x, N)/(N-1)! e^{n_p/x - n_p}.
double mixed_tail(std::uint32_t threshold_n, const SourceParams& params);

namespace detail {
/// e^-mean * sum_{m<k} y^m / m!, i.e. incomplete_gamma_ratio(y, k) scaled
/// by e^(y - mean), evaluated without forming e^y.
double scaled_gamma_sum(double y, double mean, std::uint32_t k);

/// ln(n!), exact table below 256 and a Stirling series above.
double log_factorial(std::uint32_t n);
}  // namespace detail

}  // namespace pnrthresh
