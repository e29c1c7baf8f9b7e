#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ckn {

// Machine-readable reasons attached to DomainError. The string form returned
// by reason_code() is stable and printed by the CLI.
enum class DomainReason {
  kDimensionTooSmall,      // n < 2
  kPNotAboveOne,           // p <= 1
  kQNotAboveP,             // q <= p
  kQNotBelowCritical,      // q >= p*
  kWeightNotAboveHardy,    // a <= p - n
  kNonFinite,              // NaN or infinite input
  kNonPositiveArgument,    // special-function argument <= 0
  kPhiWindow,              // Phi(s, t) outside 0 < s + n < t*gamma
  kBetaWindow,             // test-direction exponent outside summability window
  kInvalidGrid,
  kInvalidQuadratureSpec,
  kInvalidScanJob,
};

std::string_view reason_code(DomainReason reason) noexcept;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  DomainError(DomainReason reason, const std::string& detail);
  DomainReason reason() const noexcept { return reason_; }

 private:
  DomainReason reason_;
};

// Iterative procedure (quadrature subdivision, eigen-iteration, descent)
// ran out of budget before meeting its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Quadrature window could not be widened enough for the tails to vanish.
class TailError : public Error {
 public:
  using Error::Error;
};

// Log grid too narrow for the requested parameters.
class GridError : public Error {
 public:
  using Error::Error;
};

}  // namespace ckn
