#pragma once

#include <stdexcept>
#include <string>

namespace levyfield {

/// Improper integral whose partial sums fit neither a convergent nor a
/// divergent profile at the probed cutoffs. Callers widen the schedule.
class indeterminate_error : public std::runtime_error {
public:
  explicit indeterminate_error(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical integration failed; carries the partial value accumulated
/// before the failure.
class integration_failure : public std::runtime_error {
public:
  integration_failure(const std::string& what, double partial)
      : std::runtime_error(what), partial_value(partial) {}
  double partial_value;
};

/// A documented operation precondition does not hold (e.g. Dalang's
/// condition fails, so regularity indices are meaningless).
class precondition_error : public std::invalid_argument {
public:
  explicit precondition_error(const std::string& what) : std::invalid_argument(what) {}
};

class config_error : public std::invalid_argument {
public:
  explicit config_error(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace levyfield
