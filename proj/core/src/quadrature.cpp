#include "ckn/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "ckn/errors.hpp"

namespace ckn {
namespace {

// Kronrod 15-point abscissae (positive half) and weights; the Gauss 7-point
// rule uses the odd-indexed abscissae.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kMaxHalfwidth = 1e5;
constexpr double kMaxHalflineHalfwidth = 700.0;

struct Cell {
  double lo;
  double hi;
  double value;
  double error;
  double abs_value;
  bool operator<(const Cell& other) const { return error < other.error; }
};

double checked(const std::function<double(double)>& g, double s) {
  const double v = g(s);
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os.precision(17);
    os << "non-finite integrand value at s=" << s;
    throw ConvergenceError(os.str());
  }
  return v;
}

Cell gauss_kronrod(const std::function<double(double)>& g, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double f_center = checked(g, center);
  double kronrod = f_center * kWgk[7];
  double gauss = f_center * kWg[3];
  double abs_sum = std::abs(f_center) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = checked(g, center - dx);
    const double f2 = checked(g, center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    abs_sum += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  kronrod *= half;
  gauss *= half;
  return Cell{lo, hi, kronrod, std::abs(kronrod - gauss), abs_sum * std::abs(half)};
}

QuadratureResult adaptive(const std::function<double(double)>& g, double lo, double hi, double rel_tol,
                          double abs_tol, int max_subdivisions, int initial_cells) {
  std::priority_queue<Cell> cells;
  const double width = (hi - lo) / initial_cells;
  for (int i = 0; i < initial_cells; ++i) {
    const double a = lo + width * i;
    const double b = (i + 1 == initial_cells) ? hi : lo + width * (i + 1);
    cells.push(gauss_kronrod(g, a, b));
  }
  int subdivisions = 0;
  auto totals = [&] {
    // Re-summing avoids drift from incremental updates.
    double value = 0.0, error = 0.0, abs_value = 0.0;
    auto copy = cells;
    while (!copy.empty()) {
      value += copy.top().value;
      error += copy.top().error;
      abs_value += copy.top().abs_value;
      copy.pop();
    }
    return std::array<double, 3>{value, error, abs_value};
  };
  double value = 0.0, error = 0.0, abs_value = 0.0;
  {
    auto t = totals();
    value = t[0];
    error = t[1];
    abs_value = t[2];
  }
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon();
  while (true) {
    const double tol = std::max({abs_tol, rel_tol * std::abs(value), roundoff * abs_value});
    if (error <= tol) break;
    if (static_cast<int>(cells.size()) >= max_subdivisions) {
      std::ostringstream os;
      os.precision(6);
      os << "quadrature did not converge within " << max_subdivisions << " cells (error " << error
         << ", tolerance " << tol << ")";
      throw ConvergenceError(os.str());
    }
    Cell worst = cells.top();
    cells.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    Cell left = gauss_kronrod(g, worst.lo, mid);
    Cell right = gauss_kronrod(g, mid, worst.hi);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    abs_value += left.abs_value + right.abs_value - worst.abs_value;
    cells.push(left);
    cells.push(right);
    ++subdivisions;
    if (subdivisions % 64 == 0) {
      auto t = totals();
      value = t[0];
      error = t[1];
      abs_value = t[2];
    }
  }
  auto t = totals();
  return QuadratureResult{t[0], t[1], 0.5 * (hi - lo), subdivisions};
}

double tail_estimate(const std::function<double(double)>& g, double s, double rate) {
  const double edge = std::abs(checked(g, s));
  if (edge == 0.0) return 0.0;
  if (rate > 0.0) return edge / rate;
  // Local log-slope toward the edge.
  const double step = s > 0 ? -1.0 : 1.0;
  const double inner = std::abs(checked(g, s + step));
  if (inner > edge) {
    const double local = std::log(inner / edge);
    return edge / local;
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || max_subdivisions < 1 ||
      (window_halfwidth && !(*window_halfwidth > 0.0))) {
    throw DomainError(DomainReason::kInvalidQuadratureSpec,
                      "rel_tol, abs_tol, window half-width must be positive and max_subdivisions >= 1");
  }
}

QuadratureResult integrate_interval(const std::function<double(double)>& g, double lo, double hi,
                                    const QuadratureSpec& spec) {
  spec.validate();
  if (!(hi > lo)) throw DomainError(DomainReason::kInvalidQuadratureSpec, "empty interval");
  const int initial = std::clamp(static_cast<int>(std::ceil(hi - lo)), 1, std::max(1, spec.max_subdivisions / 4));
  return adaptive(g, lo, hi, spec.rel_tol, spec.abs_tol, spec.max_subdivisions, initial);
}

namespace {

QuadratureResult integrate_log_capped(const std::function<double(double)>& g, const QuadratureSpec& spec,
                                      std::optional<TailRates> rates, double max_halfwidth) {
  spec.validate();
  if (rates && !(rates->at_zero > 0.0 && rates->at_infinity > 0.0)) {
    throw DomainError(DomainReason::kInvalidQuadratureSpec, "tail decay rates must be positive");
  }
  double S = 30.0;
  if (spec.window_halfwidth) {
    S = *spec.window_halfwidth;
  } else if (rates) {
    S = 30.0 / std::min(rates->at_zero, rates->at_infinity);
  }
  S = std::min(S, max_halfwidth);
  const double rate_lo = rates ? rates->at_zero : 0.0;
  const double rate_hi = rates ? rates->at_infinity : 0.0;

  while (true) {
    const int initial = std::clamp(static_cast<int>(std::ceil(2.0 * S)), 16, std::max(16, spec.max_subdivisions / 4));
    QuadratureResult r =
        adaptive(g, -S, S, 0.5 * spec.rel_tol, 0.5 * spec.abs_tol, spec.max_subdivisions, initial);
    const double tail = tail_estimate(g, -S, rate_lo) + tail_estimate(g, S, rate_hi);
    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(r.value));
    if (tail <= 0.5 * tol) {
      r.error_estimate += tail;
      r.halfwidth = S;
      return r;
    }
    if (S >= max_halfwidth) {
      std::ostringstream os;
      os.precision(6);
      os << "integrand tails do not vanish within |s| <= " << S << " (tail estimate " << tail << ")";
      throw TailError(os.str());
    }
    S = std::min(1.5 * S, max_halfwidth);
  }
}

}  // namespace

QuadratureResult integrate_log(const std::function<double(double)>& g, const QuadratureSpec& spec,
                               std::optional<TailRates> rates) {
  return integrate_log_capped(g, spec, rates, kMaxHalfwidth);
}

double integrate_halfline(const std::function<double(double)>& f, const QuadratureSpec& spec,
                          std::optional<TailRates> rates) {
  auto g = [&f](double s) {
    const double r = std::exp(s);
    if (r == 0.0 || !std::isfinite(r)) return 0.0;
    return f(r) * r;
  };
  // Beyond |s| = 700 exp(s) leaves the double range and the integrand would
  // read as zero there.
  return integrate_log_capped(g, spec, rates, kMaxHalflineHalfwidth).value;
}

}  // namespace ckn
