#pragma once

// Brute-force reference values for the test suites. Everything here is
// computed from the defining formulas in long double and never calls into
// the library.

#include <cmath>
#include <cstdint>

namespace oracle {

using real = long double;

/// n_th^n / (n_th + 1)^(n + 1), literally.
inline real thermal(std::uint32_t n, real n_th) {
  if (n_th == 0) return n == 0 ? 1 : 0;
  return std::exp(n * std::log(n_th) - (n + 1) * std::log1p(n_th));
}

/// e^-mean mean^n / n!, through lgamma.
inline real poisson(std::uint32_t n, real mean) {
  if (mean == 0) return n == 0 ? 1 : 0;
  return std::exp(n * std::log(mean) - mean - std::lgamma(static_cast<real>(n) + 1));
}

/// Convolution of the Poisson and thermal laws.
inline real mixed(std::uint32_t n, real n_p, real n_th) {
  real s = 0;
  for (std::uint32_t m = 0; m <= n; ++m) s += poisson(m, n_p) * thermal(n - m, n_th);
  return s;
}

/// e^-y sum_{m<k} y^m/m!, by the definition with long double factorials.
inline real gamma_ratio(real y, std::uint32_t k) {
  real s = 0, fact = 1;
  for (std::uint32_t m = 0; m < k; ++m) {
    if (m > 0) fact *= m;
    s += std::pow(y, static_cast<real>(m)) / fact;
  }
  return std::exp(-y) * s;
}

/// Upper photon number beyond which every law below has negligible mass.
inline std::uint32_t sum_limit(std::uint32_t from, real n_p, real n_th) {
  return from + static_cast<std::uint32_t>(n_p + 15 * std::sqrt(n_p + 1) + 60 * (n_th + 1) + 60);
}

/// sum_{n >= N} of the mixed law, as a direct upper sum.
inline real mixed_tail(std::uint32_t threshold, real n_p, real n_th) {
  real s = 0;
  for (std::uint32_t n = sum_limit(threshold, n_p, n_th); n + 1 > threshold; --n) {
    s += mixed(n, n_p, n_th);
  }
  return s;
}

inline real thermal_tail(std::uint32_t threshold, real n_th) {
  real s = 0;
  for (std::uint32_t n = sum_limit(threshold, 0, n_th); n + 1 > threshold; --n) {
    s += thermal(n, n_th);
  }
  return s;
}

/// Threshold SNR as the quotient of brute-force tail sums.
inline real quantum_snr(real n_p, real n_th, std::uint32_t threshold) {
  return mixed_tail(threshold, n_p, n_th) / thermal_tail(threshold, n_th);
}

}  // namespace oracle
