#pragma once

#include <stdexcept>
#include <string>

namespace khav {

// Invalid mathematical input: wrong dimension, point outside the unit ball,
// parameter outside its documented range. These indicate a bug at the call
// site, never a data-dependent runtime condition, so they throw eagerly.
class domain_error : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// A computation ran to completion but could not meet the requested tolerance
// (for example the adaptive quadrature hit its depth limit). The best-effort
// value and its error estimate ride along so callers can decide whether the
// partial result is still usable.
class accuracy_error : public std::runtime_error {
public:
  accuracy_error(const std::string& what, double partial_value, double err_est)
      : std::runtime_error(what), partial_value_(partial_value), err_est_(err_est) {}

  double partial_value() const noexcept { return partial_value_; }
  double err_est() const noexcept { return err_est_; }

private:
  double partial_value_;
  double err_est_;
};

}  // namespace khav
