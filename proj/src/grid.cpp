#include "pnrthresh/grid.hpp"

#include <cmath>

#include "pnrthresh/errors.hpp"

namespace pnrthresh {

Grid::Grid(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("grid must contain at least one point");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) throw DomainError("grid values must be finite");
    if (i > 0 && !(values_[i] > values_[i - 1])) {
      throw DomainError("grid values must be strictly increasing");
    }
  }
}

Grid Grid::spaced(double lo, double hi, std::size_t points, Scale scale) {
  if (points == 0) throw DomainError("grid must contain at least one point");
  if (scale == Scale::Log && !(lo > 0.0)) throw DomainError("log grid requires lo > 0");
  if (points == 1) return Grid({lo});
  std::vector<double> v(points);
  const double steps = static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / steps;
    v[i] = scale == Scale::Linear ? lo + t * (hi - lo)
                                  : std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
  }
  // Pin the endpoints against rounding in exp/log.
  v.front() = lo;
  v.back() = hi;
  return Grid(std::move(v));
}

Grid Grid::from_values(std::vector<double> values) { return Grid(std::move(values)); }

}  // namespace pnrthresh
