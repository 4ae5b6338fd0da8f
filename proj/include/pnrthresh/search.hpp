#pragma once

#include <cmath>
#include <concepts>
#include <string>

#include "pnrthresh/errors.hpp"

namespace pnrthresh {

struct SearchPoint {
  double x;
  double fx;
};

/// Golden-section maximization of a unimodal f on [lo, hi], stopping once the
/// bracket is narrower than abs_tol.
template <std::invocable<double> F>
SearchPoint golden_section_maximize(F&& f, double lo, double hi, double abs_tol,
                                    int max_iterations = 500) {
  constexpr double kInvPhi = 0.6180339887498948482;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iterations && (b - a) > abs_tol; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? SearchPoint{c, fc} : SearchPoint{d, fd};
}

/// Bisection for a root of f in [lo, hi]. f(lo) and f(hi) must differ in
/// sign. Returns whichever final bracket end has the smaller |f|.
template <std::invocable<double> F>
SearchPoint bisect_root(F&& f, double lo, double hi, double abs_tol, int max_iterations = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return {lo, flo};
  if (fhi == 0.0) return {hi, fhi};
  if (std::signbit(flo) == std::signbit(fhi)) {
    throw SearchError("bisection interval [" + std::to_string(lo) + ", " + std::to_string(hi) +
                      "] does not bracket a root");
  }
  for (int i = 0; i < max_iterations && (hi - lo) > abs_tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return {mid, fmid};
    if (std::signbit(fmid) == std::signbit(flo)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
      fhi = fmid;
    }
  }
  return std::fabs(flo) <= std::fabs(fhi) ? SearchPoint{lo, flo} : SearchPoint{hi, fhi};
}

}  // namespace pnrthresh
