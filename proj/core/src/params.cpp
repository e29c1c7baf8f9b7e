#include "ckn/params.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ckn/errors.hpp"
#include "ckn/special_functions.hpp"

namespace ckn {

double critical_exponent(int n, double p) noexcept {
  if (p >= n) return std::numeric_limits<double>::infinity();
  return n * p / (n - p);
}

CknParams CknParams::validate(int n, double p, double q, double a) {
  auto describe = [&] {
    std::ostringstream os;
    os.precision(17);
    os << "(n=" << n << ", p=" << p << ", q=" << q << ", a=" << a << ")";
    return os.str();
  };
  if (!std::isfinite(p) || !std::isfinite(q) || !std::isfinite(a)) {
    throw DomainError(DomainReason::kNonFinite, describe());
  }
  if (n < 2) throw DomainError(DomainReason::kDimensionTooSmall, describe());
  if (!(p > 1.0)) throw DomainError(DomainReason::kPNotAboveOne, describe());
  if (!(q > p)) throw DomainError(DomainReason::kQNotAboveP, describe());
  const double p_star = critical_exponent(n, p);
  if (!(q < p_star)) {
    std::ostringstream os;
    os.precision(17);
    os << describe() << " with p*=" << p_star;
    throw DomainError(DomainReason::kQNotBelowCritical, os.str());
  }
  if (!(a > p - n)) throw DomainError(DomainReason::kWeightNotAboveHardy, describe());
  return CknParams(n, p, q, a);
}

Derived derive(const CknParams& params) {
  const double n = params.n();
  const double p = params.p();
  const double q = params.q();
  const double a = params.a();

  Derived d{};
  d.H = (n - p + a) / p;
  d.b_a = n - q * d.H;
  d.Q = (q - p) / (p - 1.0);
  d.p_conj = p / (p - 1.0);
  d.p_star = critical_exponent(params.n(), p);
  d.omega = 2.0 * std::exp(0.5 * n * std::log(std::numbers::pi) - log_gamma(0.5 * n));
  d.gamma = d.Q * d.H;
  // C = ((q/p)(n-p+a)^p/(p-1)^{p-1})^{1/(q-p)}, evaluated in logs.
  const double log_c = (std::log(q / p) + p * std::log(n - p + a) - (p - 1.0) * std::log(p - 1.0)) / (q - p);
  d.C = std::exp(log_c);
  const double slope = p * d.H / (p - 1.0);
  d.K = std::exp((p - 2.0) * std::log(slope) + (2.0 * q / p + p - 2.0) * log_c) * d.omega;
  return d;
}

double hardy_constant(const CknParams& params) {
  return std::pow(derive(params).H, params.p());
}

}  // namespace ckn
