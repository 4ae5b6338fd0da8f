#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pnrthresh {

/// Argument outside the mathematical domain of an operation
/// (negative mean, zero thermal noise where an SNR is requested, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// A 1-D search (optimum bracketing, truncation growth) failed to converge.
class SearchError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Normalizing a detection channel whose noise bins average to zero.
class DegenerateNoiseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid simulation configuration. `field()` names the offending config
/// key when known; `line()` is 0 when the error does not come from a file.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what, std::string field = {}, int line = 0)
      : std::runtime_error(what), field_(std::move(field)), line_(line) {}

  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

private:
  std::string field_;
  int line_;
};

}  // namespace pnrthresh
