#pragma once

#include <limits>

namespace ckn {

// Exponents (n, p, q, a) of the weighted inequality
//
//   c (int |x|^{-b_a} |u|^q)^{p/q} <= int |x|^a |grad u|^p,
//
// restricted to n >= 2, 1 < p < q < p*, a > p - n. Instances only exist in
// validated form; use CknParams::validate.
class CknParams {
 public:
  static CknParams validate(int n, double p, double q, double a);

  int n() const noexcept { return n_; }
  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }
  double a() const noexcept { return a_; }

  // Same (n, p, q) with a different weight exponent, revalidated.
  CknParams with_weight(double a) const { return validate(n_, p_, q_, a); }

  friend bool operator==(const CknParams&, const CknParams&) = default;

 private:
  CknParams(int n, double p, double q, double a) : n_(n), p_(p), q_(q), a_(a) {}

  int n_;
  double p_;
  double q_;
  double a_;
};

// Critical Sobolev exponent np/(n-p), or +inf when p >= n.
double critical_exponent(int n, double p) noexcept;

struct Derived {
  double b_a;     // n - q(n-p+a)/p
  double H;       // (n-p+a)/p, dilation exponent
  double Q;       // (q-p)/(p-1)
  double p_conj;  // p/(p-1)
  double p_star;  // may be +inf
  double omega;   // |S^{n-1}|
  double gamma;   // QH, radial exponent of the extremal
  double C;       // normalization of the extremal
  double K;       // (pH/(p-1))^{p-2} C^{2q/p+p-2} omega, prefactor of Phi
};

Derived derive(const CknParams& params);

// H^p, the sharp constant of the weighted Hardy inequality.
double hardy_constant(const CknParams& params);

}  // namespace ckn
