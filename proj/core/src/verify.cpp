#include "ckn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "ckn/radial_extremal.hpp"
#include "ckn/sampling.hpp"
#include "ckn/second_variation.hpp"

namespace ckn {
namespace {

double rel(double x, double y) {
  const double s = std::max(std::abs(x), std::abs(y));
  return s == 0.0 ? 0.0 : std::abs(x - y) / s;
}

std::string describe(const CknParams& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(n=" << p.n() << ", p=" << p.p() << ", q=" << p.q() << ", a=" << p.a() << ")";
  return os.str();
}

class Battery {
 public:
  Battery(std::string name, double tolerance) {
    result_.name = std::move(name);
    result_.tolerance = tolerance;
  }

  void record(double error, const CknParams& params, const char* what) {
    record(error, result_.tolerance, params, what);
  }

  // `worst` is tracked relative to each check's own tolerance when it differs.
  void record(double error, double tolerance, const CknParams& params, const char* what) {
    ++result_.checks;
    const bool ok = std::isfinite(error) && error <= tolerance;
    if (std::isfinite(error)) result_.worst = std::max(result_.worst, error * result_.tolerance / tolerance);
    if (!ok) fail(params, what, error);
  }

  void fail(const CknParams& params, const std::string& what, double error = NAN) {
    if (result_.failures++ == 0) {
      std::ostringstream os;
      os.precision(6);
      os << what << " at " << describe(params);
      if (!std::isnan(error)) os << ": error " << error;
      result_.first_failure = os.str();
    }
  }

  // Runs `body`, counting any exception as one failed check.
  template <class F>
  void guard(const CknParams& params, F&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      ++result_.checks;
      fail(params, e.what());
    }
  }

  BatteryResult take() { return std::move(result_); }

 private:
  BatteryResult result_;
};

// The three Phi arguments used by the second variation at beta = Q/p.
std::vector<PhiQuery> phi_queries(const CknParams& params) {
  const Derived d = derive(params);
  const double p = params.p();
  const double q = params.q();
  const double g = d.gamma;
  const double beta = argmin_beta(params);
  const double T = p * q / (q - p);
  const double s1 = params.a() + 2.0 * beta * d.H + (g - 1.0) * p - g;
  return {{s1 + g, T + 2.0}, {s1, T + 1.0}, {s1 - g, T}};
}

BatteryResult el_residual_battery(const std::vector<CknParams>& sample) {
  Battery b("el_residual", 1e-8);
  for (const CknParams& params : sample) {
    b.guard(params, [&] {
      const RadialExtremal ext(params);
      double worst = 0.0;
      for (int i = 0; i < 50; ++i) {
        const double r = std::pow(10.0, -3.0 + 6.0 * i / 49.0);
        const auto t = ext.el_terms(r);
        worst = std::max(worst, std::abs(t.residual()) / t.scale());
      }
      b.record(worst, params, "relative Euler-Lagrange residual");
    });
  }
  return b.take();
}

BatteryResult phi_closed_vs_quadrature_battery(const std::vector<CknParams>& sample) {
  Battery b("phi_closed_vs_quadrature", 1e-8);
  for (const CknParams& params : sample) {
    b.guard(params, [&] {
      const RadialExtremal ext(params);
      for (const PhiQuery& query : phi_queries(params)) {
        b.record(rel(phi_closed(ext, query), phi_quadrature(ext, query)), params, "Phi closed vs quadrature");
      }
    });
  }
  return b.take();
}

BatteryResult phi_recurrence_battery(const std::vector<CknParams>& sample) {
  Battery b("phi_recurrence", 1e-9);
  for (const CknParams& params : sample) {
    b.guard(params, [&] {
      const RadialExtremal ext(params);
      const auto queries = phi_queries(params);
      for (std::size_t i = 1; i < queries.size(); ++i) {
        const auto pair = phi_recurrence_check(ext, queries[i].s, queries[i].t);
        b.record(rel(pair.lhs, pair.rhs), params, "Phi recurrence (closed form)");
      }
      const auto pair = phi_recurrence_check(ext, queries[2].s, queries[2].t, PhiMethod::kQuadrature);
      b.record(rel(pair.lhs, pair.rhs), params, "Phi recurrence (quadrature)");
    });
  }
  return b.take();
}

BatteryResult reductions_battery(const std::vector<CknParams>& sample) {
  Battery b("second_variation_reductions", 1e-9);
  for (const CknParams& params : sample) {
    b.guard(params, [&] {
      const auto r = compute_I(params, argmin_beta(params));
      b.record(std::max(r.reduction1_residual, r.reduction2_residual), params, "reduction identities");
    });
  }
  return b.take();
}

BatteryResult quadrature_J_battery(const std::vector<CknParams>& sample) {
  Battery b("quadrature_J_contract", 1e-7);
  for (const CknParams& params : sample) {
    b.guard(params, [&] {
      b.record(quadrature_J(params, argmin_beta(params)).contract_residual(), params,
               "quadrature_J (s1+n)(s2+n)/I0 vs P");
    });
  }
  return b.take();
}

BatteryResult threshold_battery(const std::vector<CknParams>& sample, const VerifyHooks& hooks) {
  Battery b("threshold_exactness", 1e-8);
  const auto astar = hooks.a_star ? hooks.a_star : [](int n, double p, double q) { return a_star(n, p, q); };
  for (const CknParams& params : sample) {
    b.guard(params, [&] {
      const CknParams at = params.with_weight(astar(params.n(), params.p(), params.q()));
      b.record(std::abs(discriminant_D(at)), 1e-12, at, "D(a*)");
      const double beta = argmin_beta(at);
      b.record(std::abs(poly_P(at, beta)) / poly_P_scale(at, beta), at, "P(Q/p) at a*");
    });
  }
  return b.take();
}

BatteryResult scaling_law_battery(const std::vector<CknParams>& sample) {
  Battery b("scaling_law", 1e-10);
  for (const CknParams& params : sample) {
    b.guard(params, [&] {
      const double n = params.n();
      const double p = params.p();
      const double a_prime = p - n + 0.5 * (n - p + params.a()) + 0.3;
      const CknParams moved = params.with_weight(a_prime);
      b.record(rel(scaling_law(params, a_prime, s_rad(params)), s_rad(moved)), params, "scaling law");
    });
  }
  return b.take();
}

BatteryResult radial_energy_battery(const std::vector<CknParams>& sample) {
  Battery b("radial_energy", 1e-8);
  for (const CknParams& params : sample) {
    b.guard(params, [&] {
      const double e = shared_energy(params);
      b.record(rel(e, energy_quadrature(params)), params, "energy closed vs quadrature");
      b.record(rel(e, gradient_energy_quadrature(params)), params, "gradient energy vs quadrature");
    });
  }
  return b.take();
}

}  // namespace

std::vector<CknParams> verify_sample(VerifyLevel level) {
  if (level == VerifyLevel::kFast) return reference_params();
  std::mt19937_64 rng(kVerifySeed);
  return sample_params(rng, kFullSampleCount);
}

std::vector<BatteryResult> run_verify(VerifyLevel level, const VerifyHooks& hooks) {
  const auto sample = verify_sample(level);
  return {
      el_residual_battery(sample),     phi_closed_vs_quadrature_battery(sample),
      phi_recurrence_battery(sample),  reductions_battery(sample),
      quadrature_J_battery(sample),    threshold_battery(sample, hooks),
      scaling_law_battery(sample),     radial_energy_battery(sample),
  };
}

bool all_passed(const std::vector<BatteryResult>& results) noexcept {
  return std::all_of(results.begin(), results.end(), [](const BatteryResult& r) { return r.passed(); });
}

}  // namespace ckn
