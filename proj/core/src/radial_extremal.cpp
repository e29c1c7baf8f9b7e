#include "ckn/radial_extremal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ckn/errors.hpp"
#include "ckn/special_functions.hpp"

namespace ckn {

double softplus(double x) noexcept {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

RadialExtremal::RadialExtremal(const CknParams& params, double dilation)
    : params_(params), derived_(derive(params)), rho_(dilation), k_(params.p() / (params.q() - params.p())) {
  if (!(dilation > 0.0) || !std::isfinite(dilation)) {
    throw DomainError(DomainReason::kNonFinite, "dilation must be a positive finite number");
  }
}

double RadialExtremal::log_value(double r) const {
  const double x = rho_ * r;
  const double lift = derived_.H * std::log(rho_);
  if (x == 0.0) return lift + std::log(derived_.C);
  return lift + std::log(derived_.C) - k_ * softplus(derived_.gamma * std::log(x));
}

double RadialExtremal::value(double r) const { return std::exp(log_value(r)); }

double RadialExtremal::log_abs_derivative(double r) const {
  const double g = derived_.gamma;
  const double lx = std::log(rho_ * r);
  return (derived_.H + 1.0) * std::log(rho_) + std::log(derived_.C * k_ * g) + (g - 1.0) * lx -
         (k_ + 1.0) * softplus(g * lx);
}

double RadialExtremal::derivative(double r) const { return -std::exp(log_abs_derivative(r)); }

double RadialExtremal::log_slope(double r) const {
  const double g = derived_.gamma;
  // x^g / (1 + x^g) evaluated as a logistic in ln x.
  const double sigma = 1.0 / (1.0 + std::exp(-g * std::log(rho_ * r)));
  return -k_ * g * sigma;
}

double RadialExtremal::ResidualTerms::scale() const { return std::max(std::abs(flux_term), std::abs(source)); }

RadialExtremal::ResidualTerms RadialExtremal::el_terms(double r) const {
  const double n = params_.n();
  const double p = params_.p();
  const double q = params_.q();
  const double a = params_.a();
  const double g = derived_.gamma;
  const double e0 = n - 1.0 + a;

  // flux(r) = -r^{e0} |U'|^{p-1}; its log-derivative in r is
  // [e0 + (p-1)((g-1) - (k+1) g sigma)] / r with sigma = x^g/(1+x^g).
  // Since (p-1) k g = n - p + a the bracket is (p-1)(k+1) g / (1+x^g), which
  // stays accurate where the two terms would otherwise cancel.
  const double log_flux = e0 * std::log(r) + (p - 1.0) * log_abs_derivative(r);
  const double log_bracket = std::log((p - 1.0) * (k_ + 1.0) * g) - softplus(g * std::log(rho_ * r));
  const double flux_term = std::exp(log_flux - std::log(r) + log_bracket);

  const double source = std::exp((n - 1.0 - derived_.b_a) * std::log(r) + (q - 1.0) * log_value(r));
  return ResidualTerms{flux_term, source};
}

bool phi_window_contains(const RadialExtremal& ext, PhiQuery query) noexcept {
  const double m = query.s + ext.params().n();
  return m > 0.0 && m < query.t * ext.gamma();
}

namespace {

void require_window(const RadialExtremal& ext, PhiQuery query) {
  if (!phi_window_contains(ext, query)) {
    std::ostringstream os;
    os.precision(17);
    os << "Phi(s=" << query.s << ", t=" << query.t << ") requires 0 < s+n < t*gamma with n=" << ext.params().n()
       << ", gamma=" << ext.gamma();
    throw DomainError(DomainReason::kPhiWindow, os.str());
  }
}

}  // namespace

double phi_closed(const RadialExtremal& ext, PhiQuery query) {
  require_window(ext, query);
  const double g = ext.gamma();
  const double x = (query.s + ext.params().n()) / g;
  return ext.derived().K * std::exp(log_beta(x, query.t - x) - std::log(g));
}

double phi_quadrature(const RadialExtremal& ext, PhiQuery query, const QuadratureSpec& spec) {
  require_window(ext, query);
  const double g = ext.gamma();
  const double m = query.s + ext.params().n();
  const double t = query.t;
  auto integrand = [=](double sigma) { return std::exp(m * sigma - t * softplus(g * sigma)); };
  const auto result = integrate_log(integrand, spec, TailRates{m, t * g - m});
  return ext.derived().K * result.value;
}

double phi(const RadialExtremal& ext, PhiQuery query, PhiMethod method, const QuadratureSpec& spec) {
  return method == PhiMethod::kClosedForm ? phi_closed(ext, query) : phi_quadrature(ext, query, spec);
}

RecurrencePair phi_recurrence_check(const RadialExtremal& ext, double s, double t, PhiMethod method,
                                    const QuadratureSpec& spec) {
  const double g = ext.gamma();
  const double n = ext.params().n();
  require_window(ext, {s, t});
  require_window(ext, {s + g, t + 1.0});
  const double lhs = phi(ext, {s, t}, method, spec);
  const double rhs = t * g / (s + n) * phi(ext, {s + g, t + 1.0}, method, spec);
  return RecurrencePair{lhs, rhs};
}

double shared_energy(const CknParams& params) {
  const Derived d = derive(params);
  const double p = params.p();
  const double q = params.q();
  const double log_e = std::log(d.omega) + q * std::log(d.C) - std::log(d.gamma) +
                       log_beta(q * (p - 1.0) / (q - p), q / (q - p));
  return std::exp(log_e);
}

double energy_quadrature(const CknParams& params, const QuadratureSpec& spec) {
  const RadialExtremal ext(params);
  const Derived& d = ext.derived();
  const double q = params.q();
  const double p = params.p();
  // r^{n-1-b_a} U^q dr = exp(qH s + q ln U) ds
  auto integrand = [&](double s) { return std::exp(q * d.H * s + q * ext.log_value(std::exp(s))); };
  const TailRates rates{q * d.H, q * d.H / (p - 1.0)};
  return d.omega * integrate_log(integrand, spec, rates).value;
}

double gradient_energy_quadrature(const CknParams& params, const QuadratureSpec& spec) {
  const RadialExtremal ext(params);
  const Derived& d = ext.derived();
  const double n = params.n();
  const double p = params.p();
  const double a = params.a();
  // r^{n-1+a} |U'|^p dr = exp((n+a) s + p ln|U'|) ds
  auto integrand = [&](double s) { return std::exp((n + a) * s + p * ext.log_abs_derivative(std::exp(s))); };
  const TailRates rates{(n + a) + p * (d.gamma - 1.0), p * (ext.bracket_exponent() * d.gamma + 1.0) - (n + a)};
  return d.omega * integrate_log(integrand, spec, rates).value;
}

double s_rad(const CknParams& params) {
  return std::pow(shared_energy(params), 1.0 - params.p() / params.q());
}

double RadialBestConstant::relative_mismatch() const {
  return std::abs(energy - energy_quadrature) / std::abs(energy);
}

RadialBestConstant radial_best_constant(const CknParams& params, double tolerance, const QuadratureSpec& spec) {
  RadialBestConstant out{};
  out.energy = shared_energy(params);
  out.energy_quadrature = energy_quadrature(params, spec);
  out.value = std::pow(out.energy, 1.0 - params.p() / params.q());
  if (!(out.relative_mismatch() <= tolerance)) {
    std::ostringstream os;
    os.precision(17);
    os << "closed-form energy " << out.energy << " disagrees with quadrature " << out.energy_quadrature;
    throw ConvergenceError(os.str());
  }
  return out;
}

double scaling_law(const CknParams& params, double a_prime, double s_rad_at_a) {
  const double n = params.n();
  const double p = params.p();
  const double q = params.q();
  if (!(a_prime > p - n) || !std::isfinite(a_prime)) {
    std::ostringstream os;
    os.precision(17);
    os << "a'=" << a_prime << " must exceed p-n=" << p - n;
    throw DomainError(DomainReason::kWeightNotAboveHardy, os.str());
  }
  const double t = (n - p + a_prime) / (n - p + params.a());
  return std::pow(t, p - 1.0 + p / q) * s_rad_at_a;
}

}  // namespace ckn
