#include "ckn/second_variation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "ckn/errors.hpp"

namespace ckn {
namespace {

void require_beta(const CknParams& params, double beta) {
  const BetaWindow w = beta_window(params);
  if (!w.contains(beta) || !std::isfinite(beta)) {
    std::ostringstream os;
    os.precision(17);
    os << "beta=" << beta << " outside the summability window (" << w.lo << ", " << w.hi << ")";
    throw DomainError(DomainReason::kBetaWindow, os.str());
  }
}

double relative_gap(double x, double y) { return std::abs(x - y) / std::max(std::abs(x), std::abs(y)); }

}  // namespace

BetaWindow beta_window(const CknParams& params) {
  const double p = params.p();
  const double q = params.q();
  const double Q = (q - p) / (p - 1.0);
  // Origin: 2 beta + p + (p-2) Q > 0. Infinity: 2 beta < (2 + pq/(q-p) - p) Q - p,
  // which simplifies to (2q - p)/(p - 1).
  return BetaWindow{-(p + (p - 2.0) * Q) / 2.0, (2.0 * q - p) / (2.0 * (p - 1.0))};
}

SecondVariationReport compute_I(const CknParams& params, double beta, PhiMethod method,
                                const QuadratureSpec& spec) {
  require_beta(params, beta);
  const RadialExtremal ext(params);
  const Derived& d = ext.derived();
  const double n = params.n();
  const double p = params.p();
  const double q = params.q();
  const double a = params.a();
  const double g = d.gamma;
  const double slope = p * d.H / (p - 1.0);
  const double T = p * q / (q - p);

  SecondVariationReport r{};
  r.beta = beta;
  r.s1 = a + 2.0 * beta * d.H + (g - 1.0) * p - g;
  r.s2 = r.s1 - g;
  const double s0 = r.s1 + g;
  r.I0 = slope * slope * phi(ext, {s0, T + 2.0}, method, spec);
  r.I1 = slope * phi(ext, {r.s1, T + 1.0}, method, spec);
  r.I2 = phi(ext, {r.s2, T}, method, spec);
  r.M = q - 1.0 + q / p;
  r.P = poly_P(params, beta);
  r.D = discriminant_D(params);
  r.reduction1_residual = relative_gap(r.I1 * (r.s1 + n), r.M * r.I0);
  r.reduction2_residual = relative_gap(r.I2 * (r.s1 + n) * (r.s2 + n), r.M * q * r.I0);
  return r;
}

namespace {

struct PTerms {
  double quad, cross, tail;
};

PTerms p_terms(const CknParams& params, double beta) {
  const Derived d = derive(params);
  const double n = params.n();
  const double p = params.p();
  const double q = params.q();
  const double a = params.a();
  const double g = d.gamma;
  const double bh = beta * d.H;
  const double s1n = a + 2.0 * bh + (g - 1.0) * p - g + n;
  const double s2n = s1n - g;
  const double lead = (p - 1.0) * q * q / (p * p) - (2.0 * q / p - 1.0) * (q - 1.0);
  const double mid = 2.0 * (p * q + q - p) / p * ((p - 1.0) * q / p - (q - 1.0));
  const double tail = q * (p * q + q - p) / p * ((p - 1.0) * bh * bh + (n - 1.0));
  return {s1n * s2n * lead, -mid * s2n * bh, tail};
}

}  // namespace

double poly_P(const CknParams& params, double beta) {
  const PTerms t = p_terms(params, beta);
  return t.quad + t.cross + t.tail;
}

double poly_P_scale(const CknParams& params, double beta) {
  const PTerms t = p_terms(params, beta);
  return std::max({std::abs(t.quad), std::abs(t.cross), std::abs(t.tail)});
}

double argmin_beta(const CknParams& params) {
  const double p = params.p();
  return (params.q() - p) / (p * (p - 1.0));
}

double discriminant_D(const CknParams& params) {
  const double n = params.n();
  const double p = params.p();
  const double q = params.q();
  const double H = (n - p + params.a()) / p;
  return (n - 1.0) - H * H * (q - p) * (p * q - q + p) / (p * p);
}

double breaking_margin(const CknParams& params) {
  const double n = params.n();
  const double p = params.p();
  const double q = params.q();
  const double H = (n - p + params.a()) / p;
  const double p_conj = p / (p - 1.0);
  return H * H / (n - 1.0) - (1.0 / (q - p) - 1.0 / (q + p_conj));
}

double a_star(int n, double p, double q) {
  // (n, p, q) must be admissible; any a > p - n serves as placeholder.
  CknParams::validate(n, p, q, p - n + 1.0);
  const double p_conj = p / (p - 1.0);
  return p - n + p * std::sqrt((n - 1.0) * (1.0 / (q - p) - 1.0 / (q + p_conj)));
}

std::string_view to_string(Classification c) noexcept {
  switch (c) {
    case Classification::kSymmetryBreaking: return "SYMMETRY_BREAKING";
    case Classification::kRadialProved: return "RADIAL_PROVED";
    case Classification::kInconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

Classification classification_from_string(std::string_view text) {
  if (text == "SYMMETRY_BREAKING") return Classification::kSymmetryBreaking;
  if (text == "RADIAL_PROVED") return Classification::kRadialProved;
  if (text == "INCONCLUSIVE") return Classification::kInconclusive;
  throw Error("unknown classification '" + std::string(text) + "'");
}

Classification classify(const CknParams& params) {
  const double D = discriminant_D(params);
  if (D < -kDiscriminantTolerance && breaking_margin(params) > 0.0) return Classification::kSymmetryBreaking;
  if (params.p() == 2.0) {
    const double n = params.n();
    const double q = params.q();
    const double h = (n - 2.0 + params.a()) / 2.0;
    if (h * h / (n - 1.0) <= 1.0 / (q - 2.0) - 0.25) return Classification::kRadialProved;
  }
  return Classification::kInconclusive;
}

double QuadraticForm::contract_residual() const noexcept {
  return std::abs(scaled_J - P) / std::max(std::abs(P), scale);
}

QuadraticForm quadrature_J(const CknParams& params, double beta, const QuadratureSpec& spec) {
  require_beta(params, beta);
  const RadialExtremal ext(params);
  const Derived& d = ext.derived();
  const double n = params.n();
  const double p = params.p();
  const double q = params.q();
  const double a = params.a();
  const double g = d.gamma;
  const double k = ext.bracket_exponent();
  const double bh = beta * d.H;

  // Densities in s = ln r of the form exp(alpha s + mu ln|U'| + nu ln U).
  auto rates = [&](double alpha, double mu, double nu) {
    return TailRates{alpha + mu * (g - 1.0), -(alpha - mu * (k * g + 1.0) - nu * k * g)};
  };
  auto log_v2 = [&](double s, double r) { return 2.0 * bh * s + 2.0 * q / p * ext.log_value(r); };

  auto g2 = [&](double s) {
    const double r = std::exp(s);
    const double bracket = bh + q / p * ext.log_slope(r);
    return std::exp((n + a - 2.0) * s + (p - 2.0) * ext.log_abs_derivative(r) + log_v2(s, r)) * bracket * bracket;
  };
  auto g0 = [&](double s) {
    const double r = std::exp(s);
    return std::exp((n + a - 2.0) * s + (p - 2.0) * ext.log_abs_derivative(r) + log_v2(s, r));
  };
  auto gq = [&](double s) {
    const double r = std::exp(s);
    return std::exp((n - d.b_a) * s + (q - 2.0) * ext.log_value(r) + log_v2(s, r));
  };

  QuadraticForm out{};
  const TailRates stiff = rates(n + a - 2.0 + 2.0 * bh, p - 2.0, 2.0 * q / p);
  out.G2 = d.omega * integrate_log(g2, spec, stiff).value;
  out.G0 = d.omega * integrate_log(g0, spec, stiff).value;
  out.Gq = d.omega * integrate_log(gq, spec, rates(n - d.b_a + 2.0 * bh, 0.0, q - 2.0 + 2.0 * q / p)).value;
  out.J = (p - 1.0) * out.G2 + (n - 1.0) * out.G0 - (q - 1.0) * out.Gq;

  const SecondVariationReport report = compute_I(params, beta);
  const double factor = (report.s1 + n) * (report.s2 + n) / report.I0;
  out.scaled_J = out.J * factor;
  out.P = report.P;
  out.scale = factor * std::max({(p - 1.0) * out.G2, (n - 1.0) * out.G0, (q - 1.0) * out.Gq});
  return out;
}

}  // namespace ckn
