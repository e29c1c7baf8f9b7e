#pragma once

#include <string_view>

#include "ckn/params.hpp"
#include "ckn/quadrature.hpp"
#include "ckn/radial_extremal.hpp"

namespace ckn {

// Admissible exponents beta for the test direction v = r^{beta H} U^{q/p}:
// every integrand of the second variation is summable iff lo < beta < hi.
struct BetaWindow {
  double lo;
  double hi;
  bool contains(double beta) const noexcept { return beta > lo && beta < hi; }
};

BetaWindow beta_window(const CknParams& params);

struct SecondVariationReport {
  double beta;
  double I0, I1, I2;
  double s1, s2;
  double M;  // q - 1 + q/p
  double P;  // value of the reduced second-variation polynomial at beta
  double D;  // discriminant, independent of beta
  // Relative residuals of I1 (s1+n) = M I0 and I2 (s1+n)(s2+n) = M q I0.
  double reduction1_residual;
  double reduction2_residual;
  bool reductions_hold(double tolerance = 1e-9) const noexcept {
    return reduction1_residual <= tolerance && reduction2_residual <= tolerance;
  }
};

SecondVariationReport compute_I(const CknParams& params, double beta, PhiMethod method = PhiMethod::kClosedForm,
                                const QuadratureSpec& spec = {});

// Right-hand side of the reduced inequality 0 <= P(beta). Quadratic in beta.
double poly_P(const CknParams& params, double beta);
// Largest |term| of poly_P, the natural scale for "P is zero".
double poly_P_scale(const CknParams& params, double beta);

// Q/p, the minimizer of P over beta.
double argmin_beta(const CknParams& params);

// D = (n-1) - H^2 (q-p)(pq-q+p)/p^2. Negative iff symmetry breaking is
// certified.
double discriminant_D(const CknParams& params);

// Ratio form H^2/(n-1) - (1/(q-p) - 1/(q+p')); positive iff D < 0.
double breaking_margin(const CknParams& params);

// Unique a* > p - n at which D vanishes.
double a_star(int n, double p, double q);

enum class Classification { kSymmetryBreaking, kRadialProved, kInconclusive };

std::string_view to_string(Classification c) noexcept;
Classification classification_from_string(std::string_view text);

// |D| below this is treated as zero.
inline constexpr double kDiscriminantTolerance = 1e-12;

// SYMMETRY_BREAKING when D < 0 (both forms agree); RADIAL_PROVED for p = 2
// when ((n-2+a)/2)^2/(n-1) <= 1/(q-2) - 1/4; otherwise INCONCLUSIVE.
Classification classify(const CknParams& params);

struct QuadraticForm {
  double G2;  // omega int r^{n-1+a} |U'|^{p-2} v'^2
  double G0;  // omega int r^{n-3+a} |U'|^{p-2} v^2
  double Gq;  // omega int r^{n-1-b_a} U^{q-2} v^2
  double J;   // (p-1) G2 + (n-1) G0 - (q-1) Gq
  double scaled_J;  // J (s1+n)(s2+n) / I0, equal to P(beta)
  double P;
  double scale;     // largest |term| of scaled_J, for relative comparisons
  double contract_residual() const noexcept;
};

// Direct quadrature of the second-variation form along v, independent of the
// Phi reductions.
QuadraticForm quadrature_J(const CknParams& params, double beta, const QuadratureSpec& spec = {});

}  // namespace ckn
