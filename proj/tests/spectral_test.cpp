#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "ckn/errors.hpp"
#include "ckn/radial_extremal.hpp"
#include "ckn/second_variation.hpp"
#include "ckn/spectral.hpp"

using ckn::CknParams;
using ckn::LogGrid;

TEST(LogGrid, Construction) {
  const auto g = LogGrid::symmetric(12.0, 1025);
  EXPECT_DOUBLE_EQ(g.s_min(), -12.0);
  EXPECT_DOUBLE_EQ(g.node(1024), 12.0);
  EXPECT_NEAR(g.radius(512), 1.0, 1e-15);
  EXPECT_EQ(g.refined().count(), 2049);
  EXPECT_THROW(LogGrid::make(0.0, 1.0, 8), ckn::DomainError);
  EXPECT_THROW(LogGrid::make(1.0, 0.0, 100), ckn::DomainError);
}

TEST(Pencil, ConstantVectorGivesPotentialIntegral) {
  // F[1] = (n-1) int (A/r) ds over the grid span, since v_s = 0.
  const auto params = CknParams::validate(3, 2.0, 4.0, 0.0);
  const auto grid = ckn::default_grid(params);
  const auto pencil = ckn::assemble_pencil(params, grid);
  const std::vector<double> ones(static_cast<std::size_t>(grid.count()), 1.0);
  // (3,2,4,0): A/r = r^{n-2+a} |U'|^0 = r, so the integral is e^{s_max} - e^{s_min}.
  const double exact = 2.0 * (std::exp(grid.s_max()) - std::exp(grid.s_min()));
  EXPECT_NEAR(pencil.f_form(ones), exact, 1e-4 * exact);
}

TEST(Pencil, MassFormMatchesQuadraticFormPiece) {
  const auto params = CknParams::validate(3, 2.5, 5.0, 0.6);
  const double beta = ckn::argmin_beta(params);
  const auto grid = ckn::default_grid(params);
  const auto pencil = ckn::assemble_pencil(params, grid);
  const ckn::RadialExtremal ext(params);
  const double H = ext.derived().H;
  const double q = params.q();
  const double p = params.p();
  const auto v = ckn::DiscreteRadialFunction::sample(
      grid, [&](double r) { return std::pow(r, beta * H) * std::pow(ext.value(r), q / p); });
  const auto form = ckn::quadrature_J(params, beta);
  const double g_discrete = pencil.g_form(v.values) * ext.derived().omega;
  EXPECT_NEAR(g_discrete, form.Gq, 1e-4 * form.Gq);
}

TEST(Pencil, DecayPreconditionRaisesGridError) {
  const auto params = CknParams::validate(3, 2.0, 3.0, 2.0);
  EXPECT_THROW(ckn::check_grid_decay(params, LogGrid::symmetric(2.0, 257)), ckn::GridError);
  EXPECT_THROW(ckn::mu_min(params, LogGrid::symmetric(2.0, 257)), ckn::GridError);
  EXPECT_NO_THROW(ckn::check_grid_decay(params, ckn::default_grid(params)));
}

TEST(MuMin, CertifiesBreakingWhenDiscriminantNegative) {
  for (const auto& params : {CknParams::validate(3, 2.0, 3.0, 2.0), CknParams::validate(3, 3.0, 4.0, 4.5),
                             CknParams::validate(4, 2.5, 5.0, 1.5)}) {
    ASSERT_LT(ckn::discriminant_D(params), 0.0);
    const auto rep = ckn::mu_min(params);
    EXPECT_TRUE(rep.certified_breaking);
    EXPECT_LT(rep.mu_min, rep.threshold);
    EXPECT_LE(rep.mu_min, rep.witness_ratio);
    EXPECT_LE(rep.residual, 1e-10);
  }
}

TEST(MuMin, MonotoneUnderNestedRefinement) {
  const auto params = CknParams::validate(3, 2.0, 3.0, 1.2);
  LogGrid grid = LogGrid::symmetric(14.0, 257);
  double previous = ckn::mu_min(params, grid).mu_min;
  for (int k = 0; k < 2; ++k) {
    grid = grid.refined();
    const double current = ckn::mu_min(params, grid).mu_min;
    EXPECT_LE(current, previous * (1.0 + 1e-12));
    previous = current;
  }
}

TEST(MuMin, GroundStateHasNoSignChange) {
  const auto rep = ckn::mu_min(CknParams::validate(3, 2.0, 3.0, 2.0));
  EXPECT_EQ(rep.sign_changes, 0);
  EXPECT_EQ(rep.eigvec.values.front(), 0.0);
  EXPECT_EQ(rep.eigvec.values.back(), 0.0);
}

TEST(MuMin, WitnessAtThresholdEqualsQMinusOne) {
  for (auto [n, p, q] : {std::tuple{3, 2.0, 3.0}, std::tuple{3, 3.0, 4.0}}) {
    const auto params = CknParams::validate(n, p, q, ckn::a_star(n, p, q));
    const double w = ckn::witness_ratio(params, ckn::argmin_beta(params), ckn::default_grid(params));
    EXPECT_NEAR(w, q - 1.0, 1e-3);
  }
}

TEST(MuMin, RejectsTinyGrid) { EXPECT_THROW(LogGrid::symmetric(12.0, 4), ckn::DomainError); }

TEST(RadialRayleigh, SampledExtremalNearBestConstant) {
  const auto params = CknParams::validate(3, 2.0, 4.0, 0.0);
  const ckn::RadialExtremal ext(params);
  const auto grid = LogGrid::symmetric(12.0, 2048);
  const auto v = ckn::DiscreteRadialFunction::sample(grid, [&](double r) { return ext.value(r); });
  EXPECT_NEAR(ckn::radial_rayleigh(params, v), std::sqrt(8.0 * std::numbers::pi / 3.0),
              5e-3 * std::sqrt(8.0 * std::numbers::pi / 3.0));
}

TEST(RadialRayleigh, MinimizationRecoversBestConstant) {
  const auto params = CknParams::validate(3, 2.0, 4.0, 0.0);
  const auto m = ckn::minimize_radial_rayleigh(params, ckn::default_grid(params));
  const double target = std::sqrt(8.0 * std::numbers::pi / 3.0);
  EXPECT_NEAR(m.value, target, 1e-2 * target);
  EXPECT_LE(m.value, m.initial_value);
}

TEST(RadialRayleigh, InvariantUnderLogShift) {
  const auto params = CknParams::validate(3, 2.5, 5.0, 0.5);
  const ckn::RadialExtremal ext(params);
  const auto grid = LogGrid::symmetric(14.0, 1401);
  const auto base = ckn::DiscreteRadialFunction::sample(grid, [&](double r) { return ext.value(r); });
  const auto shifted = ckn::DiscreteRadialFunction::sample(grid, [&](double r) { return ext.dilated(std::exp(1.0)).value(r); });
  const auto a = ckn::minimize_radial_rayleigh(params, base, 200, 1e-10);
  const auto b = ckn::minimize_radial_rayleigh(params, shifted, 200, 1e-10);
  EXPECT_NEAR(a.value, b.value, 1e-3 * a.value);
}
