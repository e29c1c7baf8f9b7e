#pragma once

#include "ckn/params.hpp"
#include "ckn/quadrature.hpp"

namespace ckn {

// The explicit radial solution
//
//   U(r) = C (1 + r^gamma)^{-p/(q-p)},   gamma = QH,
//
// optionally dilated as rho^H U(rho r). The dilated profile solves the same
// Euler-Lagrange equation.
class RadialExtremal {
 public:
  explicit RadialExtremal(const CknParams& params, double dilation = 1.0);

  const CknParams& params() const noexcept { return params_; }
  const Derived& derived() const noexcept { return derived_; }
  double normalization() const noexcept { return derived_.C; }
  double gamma() const noexcept { return derived_.gamma; }
  double dilation() const noexcept { return rho_; }
  // Decay exponent p/(q-p) of the bracket (1 + r^gamma).
  double bracket_exponent() const noexcept { return k_; }

  RadialExtremal dilated(double rho) const { return RadialExtremal(params_, rho_ * rho); }

  double value(double r) const;                // r >= 0
  double derivative(double r) const;           // r > 0
  double log_value(double r) const;            // ln U(r)
  double log_abs_derivative(double r) const;   // ln |U'(r)|
  // d/ds ln U where s = ln r; equals r U'/U.
  double log_slope(double r) const;

  struct ResidualTerms {
    double flux_term;  // -(r^{n-1+a} |U'|^{p-2} U')'
    double source;     // r^{n-1-b_a} U^{q-1}
    double residual() const { return flux_term - source; }
    double scale() const;
  };
  ResidualTerms el_terms(double r) const;
  double el_residual(double r) const { return el_terms(r).residual(); }

 private:
  CknParams params_;
  Derived derived_;
  double rho_;
  double k_;
};

inline RadialExtremal make_extremal(const CknParams& params) { return RadialExtremal(params); }

// ln(1 + e^x) without overflow.
double softplus(double x) noexcept;

struct PhiQuery {
  double s;
  double t;
};

enum class PhiMethod { kClosedForm, kQuadrature };

bool phi_window_contains(const RadialExtremal& ext, PhiQuery query) noexcept;

// Phi(s, t) = K int_0^inf r^{s+n-1} (1 + r^gamma)^{-t} dr
//           = K B((s+n)/gamma, t - (s+n)/gamma) / gamma.
// Both throw DomainError outside 0 < s + n < t gamma.
double phi_closed(const RadialExtremal& ext, PhiQuery query);
double phi_quadrature(const RadialExtremal& ext, PhiQuery query, const QuadratureSpec& spec = {});
double phi(const RadialExtremal& ext, PhiQuery query, PhiMethod method, const QuadratureSpec& spec = {});

struct RecurrencePair {
  double lhs;  // Phi(s, t)
  double rhs;  // t gamma / (s + n) * Phi(s + gamma, t + 1)
};
RecurrencePair phi_recurrence_check(const RadialExtremal& ext, double s, double t,
                                    PhiMethod method = PhiMethod::kClosedForm, const QuadratureSpec& spec = {});

// Shared weighted energy E = int |x|^{-b_a} U^q = int |x|^a |grad U|^p.
double shared_energy(const CknParams& params);
double energy_quadrature(const CknParams& params, const QuadratureSpec& spec = {});
double gradient_energy_quadrature(const CknParams& params, const QuadratureSpec& spec = {});

// Best constant over radial functions, E^{1-p/q}.
double s_rad(const CknParams& params);

struct RadialBestConstant {
  double energy;             // closed form
  double energy_quadrature;  // independent quadrature of the right-hand side
  double value;              // E^{1-p/q}
  double relative_mismatch() const;
};
// Closed form with the mandatory quadrature cross-check; throws
// ConvergenceError when the two energies differ by more than `tolerance`.
RadialBestConstant radial_best_constant(const CknParams& params, double tolerance = 1e-8,
                                        const QuadratureSpec& spec = {});

// S_rad(a') predicted from S_rad(a) via t^{p-1+p/q}, t = (n-p+a')/(n-p+a).
double scaling_law(const CknParams& params, double a_prime, double s_rad_at_a);

}  // namespace ckn
