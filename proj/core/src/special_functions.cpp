#include "ckn/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "ckn/errors.hpp"

namespace ckn {
namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoefficients = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_log_gamma(double x) {
  const double z = x - 1.0;
  double sum = kLanczosCoefficients[0];
  for (std::size_t i = 1; i < kLanczosCoefficients.size(); ++i) {
    sum += kLanczosCoefficients[i] / (z + static_cast<double>(i));
  }
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(DomainReason::kNonPositiveArgument, "log_gamma(" + std::to_string(x) + ")");
  }
  if (x == 1.0 || x == 2.0) return 0.0;
  if (x < 0.5) {
    // Gamma(x) Gamma(1-x) = pi / sin(pi x); sin(pi x) > 0 on (0, 1/2).
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - lanczos_log_gamma(1.0 - x);
  }
  return lanczos_log_gamma(x);
}

double log_beta(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) {
    throw DomainError(DomainReason::kNonPositiveArgument,
                      "beta(" + std::to_string(x) + ", " + std::to_string(y) + ")");
  }
  // x + y and lnG(x) + lnG(y) are both commutative in IEEE arithmetic.
  return (log_gamma(x) + log_gamma(y)) - log_gamma(x + y);
}

double beta(double x, double y) { return std::exp(log_beta(x, y)); }

}  // namespace ckn
