#pragma once

namespace ckn {

/// ln Gamma(x) for x > 0 (Lanczos, g = 7, with reflection below 1/2).
/// Throws DomainError for x <= 0.
double log_gamma(double x);

double log_beta(double x, double y);

/// B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y); symmetric in its arguments
/// bit-for-bit.
double beta(double x, double y);

}  // namespace ckn
