#include "pnrthresh/photon_stats.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "pnrthresh/errors.hpp"

namespace pnrthresh {
namespace {

void require_mean(double mean, const char* what) {
  if (!std::isfinite(mean) || mean < 0.0) {
    throw DomainError(std::string(what) + " must be finite and >= 0, got " +
                      std::to_string(mean));
  }
}

void require_threshold(std::uint32_t threshold_n) {
  if (threshold_n < 1) throw DomainError("threshold must be >= 1");
}

}  // namespace

double detail::log_factorial(std::uint32_t n) {
  constexpr std::size_t kTable = 256;
  static const std::array<double, kTable> table = [] {
    std::array<double, kTable> t{};
    t[0] = 0.0;
    for (std::size_t i = 1; i < kTable; ++i) t[i] = t[i - 1] + std::log(static_cast<double>(i));
    return t;
  }();
  if (n < kTable) return table[n];
  const double z = static_cast<double>(n) + 1.0;
  const double inv = 1.0 / z;
  const double inv2 = inv * inv;
  constexpr double kHalfLog2Pi = 0.91893853320467274178;
  return (z - 0.5) * std::log(z) - z + kHalfLog2Pi +
         inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0)));
}

namespace {

using detail::log_factorial;

// sum_{m<k} exp(log_prefactor) * y^m / m!
double gamma_sum(double y, double log_prefactor, std::uint32_t k) {
  if (y == 0.0) return std::exp(log_prefactor);
  if (y <= kLogSpaceThreshold && log_prefactor > -700.0) {
    double term = std::exp(log_prefactor);
    double sum = 0.0;
    for (std::uint32_t m = 0; m < k; ++m) {
      sum += term;
      term *= y / static_cast<double>(m + 1);
    }
    return sum;
  }
  const double log_y = std::log(y);
  double sum = 0.0;
  for (std::uint32_t m = 0; m < k; ++m) {
    sum += std::exp(log_prefactor + m * log_y - log_factorial(m));
  }
  return sum;
}

}  // namespace

namespace detail {
double scaled_gamma_sum(double y, double mean, std::uint32_t k) {
  return gamma_sum(y, -mean, k);
}
}  // namespace detail

SourceParams::SourceParams(double n_p_mean, double n_th_mean)
    : n_p_mean_(n_p_mean), n_th_mean_(n_th_mean) {
  require_mean(n_p_mean, "signal mean photon number");
  require_mean(n_th_mean, "thermal mean photon number");
  x_ = n_th_mean / (n_th_mean + 1.0);
}

std::string_view to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::Thermal: return "thermal";
    case SourceKind::Poisson: return "poisson";
    case SourceKind::Mixed: return "mixed";
  }
  return "unknown";
}

SourceKind parse_source_kind(std::string_view name) {
  if (name == "thermal") return SourceKind::Thermal;
  if (name == "poisson") return SourceKind::Poisson;
  if (name == "mixed") return SourceKind::Mixed;
  throw DomainError("unknown source kind '" + std::string(name) +
                    "' (expected thermal, poisson or mixed)");
}

double thermal_pmf(std::uint32_t n, double n_th_mean) {
  require_mean(n_th_mean, "thermal mean photon number");
  if (n_th_mean == 0.0) return n == 0 ? 1.0 : 0.0;
  const double x = n_th_mean / (n_th_mean + 1.0);
  return std::pow(x, n) / (n_th_mean + 1.0);
}

double poisson_pmf(std::uint32_t n, double n_p_mean) {
  require_mean(n_p_mean, "signal mean photon number");
  if (n_p_mean == 0.0) return n == 0 ? 1.0 : 0.0;
  if (n_p_mean > kLogSpaceThreshold || n > kLogSpaceThreshold) {
    return std::exp(n * std::log(n_p_mean) - n_p_mean - log_factorial(n));
  }
  double p = std::exp(-n_p_mean);
  for (std::uint32_t k = 1; k <= n; ++k) p *= n_p_mean / k;
  return p;
}

double incomplete_gamma_ratio(double y, std::uint32_t k) {
  if (!std::isfinite(y) || y < 0.0) {
    throw DomainError("incomplete gamma argument must be finite and >= 0");
  }
  if (k < 1) throw DomainError("incomplete gamma shape must be >= 1");
  return gamma_sum(y, -y, k);
}

double mixed_pmf(std::uint32_t n, const SourceParams& params) {
  const double np = params.n_p_mean();
  const double x = params.x();
  if (x == 0.0) return poisson_pmf(n, np);
  if (np == 0.0) return thermal_pmf(n, params.n_th_mean());
  // (1-x) x^n e^{np/x - np} Gamma(np/x, n+1) / n!
  const double log_prefactor = std::log1p(-x) + n * std::log(x) - np;
  return gamma_sum(np / x, log_prefactor, n + 1);
}

double pmf(SourceKind kind, std::uint32_t n, const SourceParams& params) {
  switch (kind) {
    case SourceKind::Thermal: return thermal_pmf(n, params.n_th_mean());
    case SourceKind::Poisson: return poisson_pmf(n, params.n_p_mean());
    case SourceKind::Mixed: return mixed_pmf(n, params);
  }
  return 0.0;
}

double thermal_tail(std::uint32_t threshold_n, double n_th_mean) {
  require_threshold(threshold_n);
  require_mean(n_th_mean, "thermal mean photon number");
  return std::pow(n_th_mean / (n_th_mean + 1.0), threshold_n);
}

double poisson_tail(std::uint32_t threshold_n, double n_p_mean) {
  require_mean(n_p_mean, "signal mean photon number");
  if (threshold_n == 0) return 1.0;
  if (n_p_mean == 0.0) return 0.0;
  if (n_p_mean >= threshold_n) {
    return 1.0 - gamma_sum(n_p_mean, -n_p_mean, threshold_n);
  }
  // Terms decrease from n = N on since N > mean.
  double term = poisson_pmf(threshold_n, n_p_mean);
  double sum = 0.0;
  for (std::uint32_t n = threshold_n; term > std::numeric_limits<double>::epsilon() * 1e-3 * sum;
       ++n) {
    sum += term;
    term *= n_p_mean / (n + 1.0);
  }
  return sum;
}

double mixed_tail(std::uint32_t threshold_n, const SourceParams& params) {
  require_threshold(threshold_n);
  const double np = params.n_p_mean();
  const double x = params.x();
  if (x == 0.0) return poisson_tail(threshold_n, np);
  if (np == 0.0) return std::pow(x, threshold_n);
  // sum_{m<N} x^{N-m} p_p(m) = x^N e^{-np} sum_{m<N} (np/x)^m / m!
  const double log_prefactor = threshold_n * std::log(x) - np;
  return poisson_tail(threshold_n, np) + gamma_sum(np / x, log_prefactor, threshold_n);
}

PhotonPmf build_pmf(SourceKind kind, const SourceParams& params, double tolerance) {
  if (!(tolerance > 0.0 && tolerance < 1.0)) {
    throw DomainError("truncation tolerance must lie in (0, 1)");
  }
  const double cap_real = 10.0 * (params.n_p_mean() + params.n_th_mean()) + 200.0;
  const auto cap = static_cast<std::uint32_t>(std::min(cap_real, 4.0e9));

  // Analytic mass strictly above n.
  auto tail_above = [&](std::uint32_t n) {
    switch (kind) {
      case SourceKind::Thermal: return thermal_tail(n + 1, params.n_th_mean());
      case SourceKind::Poisson: return poisson_tail(n + 1, params.n_p_mean());
      case SourceKind::Mixed: return mixed_tail(n + 1, params);
    }
    return 0.0;
  };

  PhotonPmf out;
  out.kind = kind;
  out.params = params;
  for (std::uint32_t n = 0; n <= cap; ++n) {
    out.probs.push_back(pmf(kind, n, params));
    const double residual = tail_above(n);
    if (residual <= tolerance) {
      out.residual = std::max(residual, 0.0);
      return out;
    }
  }
  throw SearchError("PMF truncation did not reach tolerance " + std::to_string(tolerance) +
                    " within n_max = " + std::to_string(cap));
}

}  // namespace pnrthresh
