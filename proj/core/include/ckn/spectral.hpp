#pragma once

#include <span>
#include <vector>

#include "ckn/params.hpp"

namespace ckn {

// Nodes s_i uniform on [s_min, s_max], r_i = exp(s_i).
class LogGrid {
 public:
  static LogGrid make(double s_min, double s_max, int count);
  static LogGrid symmetric(double halfwidth, int count) { return make(-halfwidth, halfwidth, count); }

  double s_min() const noexcept { return s_min_; }
  double s_max() const noexcept { return s_max_; }
  int count() const noexcept { return count_; }
  double spacing() const noexcept { return (s_max_ - s_min_) / (count_ - 1); }
  double node(int i) const noexcept { return i + 1 == count_ ? s_max_ : s_min_ + spacing() * i; }
  double radius(int i) const;

  // Interval-halving refinement; the old nodes are a subset of the new ones.
  LogGrid refined() const { return make(s_min_, s_max_, 2 * count_ - 1); }

  friend bool operator==(const LogGrid&, const LogGrid&) = default;

 private:
  LogGrid(double s_min, double s_max, int count) : s_min_(s_min), s_max_(s_max), count_(count) {}
  double s_min_;
  double s_max_;
  int count_;
};

inline constexpr int kMinGridCount = 16;
inline constexpr double kDefaultHalfwidth = 12.0;
inline constexpr int kDefaultGridCount = 1024;
// Relative size of the test-direction densities allowed at the grid ends.
inline constexpr double kGridDecayTolerance = 1e-14;

// [-12, 12] with 1024 nodes, widened at constant spacing until the decay
// precondition of assemble_pencil holds.
LogGrid default_grid(const CknParams& params);

struct DiscreteRadialFunction {
  LogGrid grid;
  std::vector<double> values;

  template <class F>
  static DiscreteRadialFunction sample(const LogGrid& grid, F&& f) {
    DiscreteRadialFunction out{grid, std::vector<double>(static_cast<std::size_t>(grid.count()))};
    for (int i = 0; i < grid.count(); ++i) out.values[static_cast<std::size_t>(i)] = f(grid.radius(i));
    return out;
  }
};

// P1 finite elements in s on the full node set (no boundary conditions):
//   F[v] = (p-1) int (A/r) v_s^2 ds + (n-1) int (A/r) v^2 ds,  A = r^{n-1+a}|U'|^{p-2}
//   G[v] = int W r v^2 ds,                                       W = r^{n-1-b_a} U^{q-2}
// Both matrices are symmetric tridiagonal. The Dirichlet clamp is applied by
// the solvers, which drop the two end nodes.
struct TridiagonalPencil {
  LogGrid grid;
  std::vector<double> f_diag, f_off;
  std::vector<double> g_diag, g_off;

  double f_form(std::span<const double> x) const;
  double g_form(std::span<const double> x) const;
};

// Throws GridError if the densities of F and G along the test direction
// r^{QH/p} U^{q/p} are not below kGridDecayTolerance of their peak at both
// ends of the grid.
void check_grid_decay(const CknParams& params, const LogGrid& grid);

TridiagonalPencil assemble_pencil(const CknParams& params, const LogGrid& grid);

struct StabilityReport {
  LogGrid grid;
  double mu_min;
  double threshold;  // q - 1
  bool certified_breaking;
  DiscreteRadialFunction eigvec;  // G-normalized, zero at both ends
  double witness_ratio;           // F/G along r^{QH/p} U^{q/p}
  double residual;                // max_i |F x - mu G x|_i / (|F| |x| + mu |G| |x|)_i
  int sign_changes;               // interior sign changes of eigvec
};

inline constexpr double kCertificationMargin = 1e-6;

StabilityReport mu_min(const CknParams& params, const LogGrid& grid);
inline StabilityReport mu_min(const CknParams& params) { return mu_min(params, default_grid(params)); }

// Rayleigh quotient F/G of the clamped pencil on samples of r^{beta H} U^{q/p}.
double witness_ratio(const CknParams& params, double beta, const LogGrid& grid);

// Discrete radial quotient
//   omega sum_e c_e |dv/ds|^p / (omega sum_i m_i |v_i|^q)^{p/q},
// c_e the exact element integral of r^{n-p+a}, m_i trapezoidal weights of
// r^{n-b_a}.
double radial_rayleigh(const CknParams& params, const DiscreteRadialFunction& v);

struct RadialMinimization {
  double value;
  double initial_value;
  DiscreteRadialFunction minimizer;
  int iterations;
};

// Normalized gradient descent on radial_rayleigh from the sampled extremal,
// end values held fixed; backtracking halves the step from 0.1.
RadialMinimization minimize_radial_rayleigh(const CknParams& params, const LogGrid& grid, int max_iters = 200,
                                            double tol = 1e-10);
// Same, from a caller-supplied starting profile on its own grid.
RadialMinimization minimize_radial_rayleigh(const CknParams& params, DiscreteRadialFunction start, int max_iters,
                                            double tol);

}  // namespace ckn
