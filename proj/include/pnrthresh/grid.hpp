#pragma once

#include <cstddef>
#include <vector>

namespace pnrthresh {

/// Strictly increasing, nonempty set of sample points.
class Grid {
public:
  enum class Scale { Linear, Log };

  /// `points` samples spanning [lo, hi] inclusive. A single point yields {lo}.
  static Grid spaced(double lo, double hi, std::size_t points, Scale scale);
  static Grid linear(double lo, double hi, std::size_t points) {
    return spaced(lo, hi, points, Scale::Linear);
  }
  static Grid log(double lo, double hi, std::size_t points) {
    return spaced(lo, hi, points, Scale::Log);
  }
  static Grid from_values(std::vector<double> values);

  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

private:
  explicit Grid(std::vector<double> values);

  std::vector<double> values_;
};

}  // namespace pnrthresh
