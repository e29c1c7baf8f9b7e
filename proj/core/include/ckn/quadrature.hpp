#pragma once

#include <functional>
#include <optional>

namespace ckn {

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_subdivisions = 2000;
  // Starting half-width S of the log window [-S, S]. When empty it is
  // derived from the tail decay rates.
  std::optional<double> window_halfwidth;

  void validate() const;
};

// Exponential decay rates of the log-transformed integrand g(s) = f(e^s) e^s
// as s -> -inf (at_zero) and s -> +inf (at_infinity). For power-law
// integrands r^m (1+r^g)^{-t} these are m+1 and g t - m - 1.
struct TailRates {
  double at_zero;
  double at_infinity;
};

struct QuadratureResult {
  double value;
  double error_estimate;  // discretization + truncation
  double halfwidth;       // final window S
  int subdivisions;
};

// Integral of g over the real line, where g is already in log coordinates and
// decays at both ends. Adaptive Gauss-Kronrod 7/15 on [-S, S]; S grows by
// 1.5x until the truncation estimate is below tolerance.
QuadratureResult integrate_log(const std::function<double(double)>& g, const QuadratureSpec& spec = {},
                               std::optional<TailRates> rates = std::nullopt);

// Integral of f over (0, inf) via the substitution r = e^s.
double integrate_halfline(const std::function<double(double)>& f, const QuadratureSpec& spec = {},
                          std::optional<TailRates> rates = std::nullopt);

// Plain adaptive Gauss-Kronrod on a finite interval [lo, hi].
QuadratureResult integrate_interval(const std::function<double(double)>& g, double lo, double hi,
                                    const QuadratureSpec& spec = {});

}  // namespace ckn
