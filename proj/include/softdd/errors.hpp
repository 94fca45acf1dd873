#ifndef SOFTDD_ERRORS_HPP
#define SOFTDD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace softdd {

/// Bad input: malformed text, out-of-range argument, inconsistent dimensions.
/// The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to reach its tolerance. The CLI maps this to
/// exit code 3.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

} // namespace softdd

#endif
