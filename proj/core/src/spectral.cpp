#include "ckn/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "ckn/errors.hpp"
#include "ckn/radial_extremal.hpp"
#include "ckn/second_variation.hpp"

namespace ckn {
namespace {

constexpr double kMaxDefaultHalfwidth = 400.0;

// 3-point Gauss-Legendre on [0, 1].
constexpr std::array<double, 3> kGaussNodes = {0.1127016653792583114820735, 0.5, 0.8872983346207416885179265};
constexpr std::array<double, 3> kGaussWeights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

// Log-densities of the pencil weights in s-measure.
struct Weights {
  const RadialExtremal& ext;
  double n, p, q, a;

  double log_kinetic(double s) const {  // ln(A/r) = ln(B r)
    return (n + a - 2.0) * s + (p - 2.0) * ext.log_abs_derivative(std::exp(s));
  }
  double log_mass(double s) const {  // ln(W r)
    return (n - ext.derived().b_a) * s + (q - 2.0) * ext.log_value(std::exp(s));
  }
};

Weights weights_for(const RadialExtremal& ext) {
  const auto& pr = ext.params();
  return Weights{ext, static_cast<double>(pr.n()), pr.p(), pr.q(), pr.a()};
}

// Interior (clamped) view of a full-node pencil.
struct Clamped {
  std::span<const double> fd, fo, gd, go;  // fo/go couple interior i and i+1
};

Clamped clamp(const TridiagonalPencil& pencil) {
  const std::size_t m = pencil.f_diag.size() - 2;
  return Clamped{std::span(pencil.f_diag).subspan(1, m), std::span(pencil.f_off).subspan(1, m - 1),
                 std::span(pencil.g_diag).subspan(1, m), std::span(pencil.g_off).subspan(1, m - 1)};
}

// Number of eigenvalues of the clamped pencil below mu (inertia of F - mu G).
int sturm_count(const Clamped& c, double mu) {
  int negatives = 0;
  double pivot = 1.0;
  for (std::size_t i = 0; i < c.fd.size(); ++i) {
    double d = c.fd[i] - mu * c.gd[i];
    if (i > 0) {
      const double e = c.fo[i - 1] - mu * c.go[i - 1];
      d -= e * e / pivot;
    }
    if (d == 0.0) d = -std::numeric_limits<double>::epsilon() * std::abs(c.fd[i]);
    if (d < 0.0) ++negatives;
    pivot = d;
  }
  return negatives;
}

double form(std::span<const double> diag, std::span<const double> off, std::span<const double> x) {
  double sum = 0.0;
  for (std::size_t i = 0; i < diag.size(); ++i) sum += diag[i] * x[i] * x[i];
  for (std::size_t i = 0; i < off.size(); ++i) sum += 2.0 * off[i] * x[i] * x[i + 1];
  return sum;
}

std::vector<double> apply(std::span<const double> diag, std::span<const double> off, std::span<const double> x) {
  std::vector<double> y(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) {
    double v = diag[i] * x[i];
    if (i > 0) v += off[i - 1] * x[i - 1];
    if (i + 1 < diag.size()) v += off[i] * x[i + 1];
    y[i] = v;
  }
  return y;
}

// |A| |x| for the tridiagonal A.
std::vector<double> abs_apply(std::span<const double> diag, std::span<const double> off, std::span<const double> x) {
  std::vector<double> y(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) {
    double v = std::abs(diag[i] * x[i]);
    if (i > 0) v += std::abs(off[i - 1] * x[i - 1]);
    if (i + 1 < diag.size()) v += std::abs(off[i] * x[i + 1]);
    y[i] = v;
  }
  return y;
}

// Solves (F - sigma G) y = b by symmetric tridiagonal elimination.
std::vector<double> shifted_solve(const Clamped& c, double sigma, std::span<const double> b) {
  const std::size_t m = c.fd.size();
  std::vector<double> diag(m), off(m > 0 ? m - 1 : 0), y(b.begin(), b.end());
  for (std::size_t i = 0; i < m; ++i) diag[i] = c.fd[i] - sigma * c.gd[i];
  for (std::size_t i = 0; i + 1 < m; ++i) off[i] = c.fo[i] - sigma * c.go[i];
  for (std::size_t i = 1; i < m; ++i) {
    const double l = off[i - 1] / diag[i - 1];
    diag[i] -= l * off[i - 1];
    y[i] -= l * y[i - 1];
  }
  y[m - 1] /= diag[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) y[i] = (y[i] - off[i] * y[i + 1]) / diag[i];
  return y;
}

double norm2(std::span<const double> x) {
  return std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
}

std::vector<double> witness_samples(const RadialExtremal& ext, double beta, const LogGrid& grid) {
  const double bh = beta * ext.derived().H;
  const double qp = ext.params().q() / ext.params().p();
  std::vector<double> x(static_cast<std::size_t>(grid.count()));
  for (int i = 0; i < grid.count(); ++i) {
    const double s = grid.node(i);
    x[static_cast<std::size_t>(i)] = std::exp(bh * s + qp * ext.log_value(std::exp(s)));
  }
  return x;
}

bool decays(const CknParams& params, const LogGrid& grid) {
  const RadialExtremal ext(params);
  const Weights w = weights_for(ext);
  const double bh = argmin_beta(params) * ext.derived().H;
  const double qp = params.q() / params.p();
  const double log_tol = std::log(kGridDecayTolerance);

  // Log-densities of the three quadratic forms along the test direction.
  auto densities = [&](double s) {
    const double r = std::exp(s);
    const double log_v2 = 2.0 * (bh * s + qp * ext.log_value(r));
    const double bracket = std::abs(bh + qp * ext.log_slope(r));
    const double kin = w.log_kinetic(s);
    return std::array<double, 3>{kin + log_v2 + 2.0 * std::log(bracket), kin + log_v2, w.log_mass(s) + log_v2};
  };
  std::array<double, 3> peak;
  peak.fill(-std::numeric_limits<double>::infinity());
  for (int i = 0; i < grid.count(); ++i) {
    const auto d = densities(grid.node(i));
    for (int j = 0; j < 3; ++j) peak[j] = std::max(peak[j], d[j]);
  }
  for (double s : {grid.s_min(), grid.s_max()}) {
    const auto d = densities(s);
    for (int j = 0; j < 3; ++j) {
      if (!(d[j] - peak[j] <= log_tol) && !std::isinf(d[j])) return false;
    }
  }
  return true;
}

}  // namespace

LogGrid LogGrid::make(double s_min, double s_max, int count) {
  if (!(s_min < s_max) || !std::isfinite(s_min) || !std::isfinite(s_max) || count < kMinGridCount) {
    std::ostringstream os;
    os << "log grid needs s_min < s_max and count >= " << kMinGridCount << " (got [" << s_min << ", " << s_max
       << "], " << count << ")";
    throw DomainError(DomainReason::kInvalidGrid, os.str());
  }
  return LogGrid(s_min, s_max, count);
}

double LogGrid::radius(int i) const { return std::exp(node(i)); }

LogGrid default_grid(const CknParams& params) {
  const double spacing = 2.0 * kDefaultHalfwidth / (kDefaultGridCount - 1);
  double halfwidth = kDefaultHalfwidth;
  while (true) {
    const int count = static_cast<int>(std::lround(2.0 * halfwidth / spacing)) + 1;
    LogGrid grid = LogGrid::symmetric(halfwidth, count);
    if (decays(params, grid)) return grid;
    if (halfwidth >= kMaxDefaultHalfwidth) {
      throw GridError("no log grid up to |s| <= 400 resolves the decay of the second-variation densities");
    }
    halfwidth = std::min(1.25 * halfwidth, kMaxDefaultHalfwidth);
  }
}

double TridiagonalPencil::f_form(std::span<const double> x) const { return form(f_diag, f_off, x); }
double TridiagonalPencil::g_form(std::span<const double> x) const { return form(g_diag, g_off, x); }

void check_grid_decay(const CknParams& params, const LogGrid& grid) {
  if (!decays(params, grid)) {
    std::ostringstream os;
    os << "log grid [" << grid.s_min() << ", " << grid.s_max()
       << "] too narrow: second-variation densities exceed 1e-14 of their peak at an end";
    throw GridError(os.str());
  }
}

TridiagonalPencil assemble_pencil(const CknParams& params, const LogGrid& grid) {
  check_grid_decay(params, grid);
  const RadialExtremal ext(params);
  const Weights w = weights_for(ext);
  const double p = params.p();
  const double n = params.n();
  const auto N = static_cast<std::size_t>(grid.count());
  const double h = grid.spacing();

  TridiagonalPencil out{grid, std::vector<double>(N, 0.0), std::vector<double>(N - 1, 0.0),
                        std::vector<double>(N, 0.0), std::vector<double>(N - 1, 0.0)};
  for (std::size_t e = 0; e + 1 < N; ++e) {
    const double s0 = grid.node(static_cast<int>(e));
    double kin = 0.0, kin00 = 0.0, kin01 = 0.0, kin11 = 0.0;
    double mass00 = 0.0, mass01 = 0.0, mass11 = 0.0;
    for (std::size_t j = 0; j < kGaussNodes.size(); ++j) {
      const double t = kGaussNodes[j];
      const double s = s0 + h * t;
      const double wk = kGaussWeights[j] * h * std::exp(w.log_kinetic(s));
      const double wm = kGaussWeights[j] * h * std::exp(w.log_mass(s));
      const double phi0 = 1.0 - t;
      const double phi1 = t;
      kin += wk;
      kin00 += wk * phi0 * phi0;
      kin01 += wk * phi0 * phi1;
      kin11 += wk * phi1 * phi1;
      mass00 += wm * phi0 * phi0;
      mass01 += wm * phi0 * phi1;
      mass11 += wm * phi1 * phi1;
    }
    const double stiff = (p - 1.0) * kin / (h * h);
    out.f_diag[e] += stiff + (n - 1.0) * kin00;
    out.f_diag[e + 1] += stiff + (n - 1.0) * kin11;
    out.f_off[e] += -stiff + (n - 1.0) * kin01;
    out.g_diag[e] += mass00;
    out.g_diag[e + 1] += mass11;
    out.g_off[e] += mass01;
  }
  return out;
}

double witness_ratio(const CknParams& params, double beta, const LogGrid& grid) {
  if (!beta_window(params).contains(beta)) {
    throw DomainError(DomainReason::kBetaWindow, "witness exponent outside the summability window");
  }
  const TridiagonalPencil pencil = assemble_pencil(params, grid);
  const RadialExtremal ext(params);
  std::vector<double> x = witness_samples(ext, beta, grid);
  x.front() = 0.0;
  x.back() = 0.0;
  return pencil.f_form(x) / pencil.g_form(x);
}

StabilityReport mu_min(const CknParams& params, const LogGrid& grid) {
  const TridiagonalPencil pencil = assemble_pencil(params, grid);
  const Clamped c = clamp(pencil);
  const RadialExtremal ext(params);

  std::vector<double> witness = witness_samples(ext, argmin_beta(params), grid);
  witness.front() = 0.0;
  witness.back() = 0.0;
  const double ratio = pencil.f_form(witness) / pencil.g_form(witness);

  // Bisection on the inertia of F - mu G. Positive definiteness of the
  // clamped F puts the lowest eigenvalue above 0; the witness bounds it above.
  double lo = 0.0;
  double hi = ratio * (1.0 + 1e-12);
  for (int guard = 0; sturm_count(c, hi) == 0; ++guard) {
    if (guard > 200) throw ConvergenceError("no eigenvalue below the witness Rayleigh quotient");
    hi *= 2.0;
  }
  for (int it = 0; it < 300 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(c, mid) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  // Inverse iteration just below the eigenvalue, where F - lo G is still
  // positive definite.
  std::vector<double> x(witness.begin() + 1, witness.end() - 1);
  double mu = hi;
  double residual = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 50; ++it) {
    const std::vector<double> gx = apply(c.gd, c.go, x);
    x = shifted_solve(c, lo, gx);
    const double gnorm = std::sqrt(form(c.gd, c.go, x));
    for (double& v : x) v /= gnorm;
    mu = form(c.fd, c.fo, x);  // G-norm is 1
    const std::vector<double> fx = apply(c.fd, c.fo, x);
    const std::vector<double> gx2 = apply(c.gd, c.go, x);
    // Componentwise backward error, insensitive to the spread of the weights.
    const std::vector<double> ax = abs_apply(c.fd, c.fo, x);
    const std::vector<double> bx = abs_apply(c.gd, c.go, x);
    residual = 0.0;
    for (std::size_t i = 0; i < fx.size(); ++i) {
      const double scale = ax[i] + std::abs(mu) * bx[i];
      if (scale > 0.0) residual = std::max(residual, std::abs(fx[i] - mu * gx2[i]) / scale);
    }
    if (residual <= 1e-10) break;
  }
  if (!(residual <= 1e-10)) {
    std::ostringstream os;
    os << "inverse iteration stalled at relative residual " << residual;
    throw ConvergenceError(os.str());
  }

  // Fix the sign so the dominant lobe is positive.
  const auto peak = std::max_element(x.begin(), x.end(), [](double u, double v) { return std::abs(u) < std::abs(v); });
  if (*peak < 0.0) {
    for (double& v : x) v = -v;
  }
  const double cutoff = 1e-8 * std::abs(*peak);
  int sign_changes = 0;
  int last_sign = 0;
  for (double v : x) {
    if (std::abs(v) <= cutoff) continue;
    const int sign = v > 0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) ++sign_changes;
    last_sign = sign;
  }

  StabilityReport report{grid, mu, params.q() - 1.0, false, DiscreteRadialFunction{grid, {}}, ratio, residual,
                         sign_changes};
  report.certified_breaking = mu < report.threshold - kCertificationMargin;
  report.eigvec.values.assign(static_cast<std::size_t>(grid.count()), 0.0);
  std::copy(x.begin(), x.end(), report.eigvec.values.begin() + 1);
  return report;
}

double radial_rayleigh(const CknParams& params, const DiscreteRadialFunction& v) {
  const Derived d = derive(params);
  const LogGrid& grid = v.grid;
  const double p = params.p();
  const double q = params.q();
  const double alpha = params.n() + params.a() - params.p();
  const double beta = params.n() - d.b_a;
  const double h = grid.spacing();
  double numerator = 0.0;
  for (int e = 0; e + 1 < grid.count(); ++e) {
    const double s0 = grid.node(e);
    const double c = alpha == 0.0 ? h : (std::exp(alpha * (s0 + h)) - std::exp(alpha * s0)) / alpha;
    const double slope = (v.values[static_cast<std::size_t>(e) + 1] - v.values[static_cast<std::size_t>(e)]) / h;
    numerator += c * std::pow(std::abs(slope), p);
  }
  double mass = 0.0;
  for (int i = 0; i < grid.count(); ++i) {
    const double trap = (i == 0 || i + 1 == grid.count()) ? 0.5 * h : h;
    mass += trap * std::exp(beta * grid.node(i)) * std::pow(std::abs(v.values[static_cast<std::size_t>(i)]), q);
  }
  return d.omega * numerator / std::pow(d.omega * mass, p / q);
}

namespace {

// Value and gradient of radial_rayleigh with respect to the nodal values.
double rayleigh_with_gradient(const CknParams& params, const DiscreteRadialFunction& v, std::vector<double>& grad,
                              std::vector<double>& diag) {
  const Derived d = derive(params);
  const LogGrid& grid = v.grid;
  const auto N = static_cast<std::size_t>(grid.count());
  const double p = params.p();
  const double q = params.q();
  const double alpha = params.n() + params.a() - params.p();
  const double beta = params.n() - d.b_a;
  const double h = grid.spacing();

  std::vector<double> dnum(N, 0.0), dmass(N, 0.0), stiff(N, 0.0);
  double numerator = 0.0;
  for (std::size_t e = 0; e + 1 < N; ++e) {
    const double s0 = grid.node(static_cast<int>(e));
    const double c = alpha == 0.0 ? h : (std::exp(alpha * (s0 + h)) - std::exp(alpha * s0)) / alpha;
    const double slope = (v.values[e + 1] - v.values[e]) / h;
    const double mag = std::abs(slope);
    numerator += c * std::pow(mag, p);
    const double flux = mag == 0.0 ? 0.0 : p * c * std::pow(mag, p - 1.0) * (slope > 0 ? 1.0 : -1.0) / h;
    dnum[e] -= flux;
    dnum[e + 1] += flux;
    const double k = p * (p - 1.0) * c * std::pow(std::max(mag, 1e-300), p - 2.0) / (h * h);
    stiff[e] += k;
    stiff[e + 1] += k;
  }
  double mass = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double trap = (i == 0 || i + 1 == N) ? 0.5 * h : h;
    const double m = trap * std::exp(beta * grid.node(static_cast<int>(i)));
    const double mag = std::abs(v.values[i]);
    mass += m * std::pow(mag, q);
    dmass[i] = mag == 0.0 ? 0.0 : q * m * std::pow(mag, q - 1.0) * (v.values[i] > 0 ? 1.0 : -1.0);
  }
  const double denom = std::pow(d.omega * mass, p / q);
  const double value = d.omega * numerator / denom;
  // d/dv [omega N / (omega M)^{p/q}] = omega dN / denom - value (p/q) dM / M
  grad.assign(N, 0.0);
  diag.assign(N, 1.0);
  double stiff_max = 0.0;
  for (std::size_t i = 1; i + 1 < N; ++i) {
    grad[i] = d.omega * dnum[i] / denom - value * (p / q) * dmass[i] / mass;
    stiff_max = std::max(stiff_max, stiff[i]);
  }
  for (std::size_t i = 1; i + 1 < N; ++i) diag[i] = d.omega * std::max(stiff[i], 1e-12 * stiff_max) / denom;
  return value;
}

}  // namespace

RadialMinimization minimize_radial_rayleigh(const CknParams& params, DiscreteRadialFunction start, int max_iters,
                                            double tol) {
  DiscreteRadialFunction x = std::move(start);
  std::vector<double> grad, diag;
  double value = rayleigh_with_gradient(params, x, grad, diag);
  RadialMinimization out{value, value, x, 0};
  if (!std::isfinite(value)) throw ConvergenceError("radial quotient is not finite at the starting profile");

  constexpr double kStepFloor = 1e-18;
  std::vector<double> dir(x.values.size());
  double step = 1.0;
  int it = 0;
  for (; it < max_iters; ++it) {
    // Jacobi-scaled gradient; a unit step is a diagonal Newton step.
    double gnorm = 0.0;
    for (std::size_t i = 0; i < dir.size(); ++i) {
      dir[i] = grad[i] / diag[i];
      gnorm += grad[i] * grad[i];
    }
    if (gnorm == 0.0) break;
    step = std::min(1.0, 2.0 * step);
    DiscreteRadialFunction trial = x;
    double trial_value = value;
    bool improved = false;
    while (step >= kStepFloor) {
      for (std::size_t i = 0; i < x.values.size(); ++i) trial.values[i] = x.values[i] - step * dir[i];
      trial_value = radial_rayleigh(params, trial);
      if (std::isfinite(trial_value) && trial_value < value) {
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) {
      if (it == 0 && std::sqrt(gnorm) * norm2(x.values) > 1e-8 * value) {
        throw ConvergenceError("radial descent could not decrease the quotient (step-size floor hit)");
      }
      break;
    }
    const double decrease = (value - trial_value) / value;
    x = std::move(trial);
    value = rayleigh_with_gradient(params, x, grad, diag);
    if (decrease < tol) {
      ++it;
      break;
    }
  }
  out.value = value;
  out.minimizer = std::move(x);
  out.iterations = it;
  return out;
}

RadialMinimization minimize_radial_rayleigh(const CknParams& params, const LogGrid& grid, int max_iters,
                                            double tol) {
  const RadialExtremal ext(params);
  return minimize_radial_rayleigh(
      params, DiscreteRadialFunction::sample(grid, [&](double r) { return ext.value(r); }), max_iters, tol);
}

}  // namespace ckn
