#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "ckn/errors.hpp"
#include "ckn/sampling.hpp"
#include "ckn/second_variation.hpp"

using ckn::Classification;
using ckn::CknParams;

TEST(SecondVariation, HandValuesAtThreeTwoFour) {
  const auto params = CknParams::validate(3, 2.0, 4.0, 0.0);
  EXPECT_DOUBLE_EQ(ckn::argmin_beta(params), 1.0);
  const auto r = ckn::compute_I(params, 1.0);
  const double pi = std::numbers::pi;
  EXPECT_NEAR(r.I0, 4.0 * pi / 5.0, 1e-13);
  EXPECT_NEAR(r.I1, 4.0 * pi / 3.0, 1e-13);
  EXPECT_NEAR(r.I2, 8.0 * pi / 3.0, 1e-13);
  EXPECT_DOUBLE_EQ(r.M, 5.0);
  EXPECT_TRUE(r.reductions_hold());
  EXPECT_NEAR(r.D, 1.25, 1e-15);
}

TEST(SecondVariation, BetaWindow) {
  const auto params = CknParams::validate(3, 2.0, 4.0, 0.0);
  const auto w = ckn::beta_window(params);
  EXPECT_DOUBLE_EQ(w.lo, -1.0);
  EXPECT_DOUBLE_EQ(w.hi, 3.0);
  try {
    ckn::compute_I(params, 5.0);
    FAIL();
  } catch (const ckn::DomainError& e) {
    EXPECT_EQ(e.reason(), ckn::DomainReason::kBetaWindow);
  }
  EXPECT_NO_THROW(ckn::compute_I(params, 2.9));
  EXPECT_THROW(ckn::compute_I(params, 3.0), ckn::DomainError);
}

TEST(SecondVariation, ReductionsBothMethodsRandomized) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (const auto& params : ckn::sample_params(rng, 30)) {
    const auto w = ckn::beta_window(params);
    const double beta = w.lo + (w.hi - w.lo) * u(rng);
    EXPECT_TRUE(ckn::compute_I(params, beta).reductions_hold(1e-9));
    EXPECT_TRUE(ckn::compute_I(params, beta, ckn::PhiMethod::kQuadrature).reductions_hold(1e-8));
  }
}

TEST(SecondVariation, QuadratureFormMatchesPolynomial) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  for (const auto& params : ckn::sample_params(rng, 27)) {
    const auto w = ckn::beta_window(params);
    const auto form = ckn::quadrature_J(params, w.lo + (w.hi - w.lo) * u(rng));
    EXPECT_LE(form.contract_residual(), 1e-7);
  }
}

TEST(SecondVariation, PolynomialIsParabolaWithVertexAtQOverP) {
  const auto params = CknParams::validate(4, 2.5, 5.0, 1.0);
  const double b0 = ckn::argmin_beta(params);
  const double h = 0.3;
  const double left = ckn::poly_P(params, b0 - h);
  const double mid = ckn::poly_P(params, b0);
  const double right = ckn::poly_P(params, b0 + h);
  EXPECT_NEAR(left, right, 1e-10 * std::abs(mid) + 1e-10);
  EXPECT_GT(left, mid);
  // A quadratic is reproduced exactly by a three-point fit.
  const double curvature = (left - 2.0 * mid + right) / (h * h);
  EXPECT_NEAR(ckn::poly_P(params, b0 + 1.1), mid + 0.5 * curvature * 1.21, 1e-9 * std::abs(mid) + 1e-9);
}

TEST(SecondVariation, MinimumOfPolynomialHasSignOfD) {
  std::mt19937_64 rng(31);
  for (const auto& params : ckn::sample_params(rng, 60)) {
    const double D = ckn::discriminant_D(params);
    if (std::abs(D) < 1e-9) continue;
    const double P = ckn::poly_P(params, ckn::argmin_beta(params));
    EXPECT_EQ(P < 0.0, D < 0.0) << "D=" << D << " P=" << P;
    EXPECT_EQ(ckn::breaking_margin(params) > 0.0, D < 0.0);
  }
}

TEST(Threshold, ClosedFormValues) {
  EXPECT_NEAR(ckn::a_star(3, 2.0, 3.0), 1.5298221281347035, 1e-10);
  EXPECT_NEAR(ckn::a_star(3, 3.0, 4.0), 3.8376128944009878174, 1e-12);
  EXPECT_NEAR(ckn::a_star(4, 2.5, 5.0), 0.66506350946109661691, 1e-12);
  EXPECT_NEAR(ckn::a_star(2, 1.5, 4.0), 0.26063882925566491976, 1e-12);
}

TEST(Threshold, DiscriminantVanishesAtAStar) {
  std::mt19937_64 rng(37);
  for (const auto& params : ckn::sample_params(rng, 40)) {
    const auto at = params.with_weight(ckn::a_star(params.n(), params.p(), params.q()));
    EXPECT_LE(std::abs(ckn::discriminant_D(at)), 1e-12);
    const double beta = ckn::argmin_beta(at);
    EXPECT_LE(std::abs(ckn::poly_P(at, beta)), 1e-8 * ckn::poly_P_scale(at, beta));
  }
}

TEST(Threshold, RejectsInvalidTriple) {
  EXPECT_THROW(ckn::a_star(3, 2.0, 6.5), ckn::DomainError);
  EXPECT_THROW(ckn::a_star(1, 2.0, 3.0), ckn::DomainError);
}

TEST(Classify, Examples) {
  EXPECT_EQ(ckn::classify(CknParams::validate(3, 2.0, 3.0, 2.0)), Classification::kSymmetryBreaking);
  EXPECT_EQ(ckn::classify(CknParams::validate(3, 2.0, 3.0, 0.0)), Classification::kRadialProved);
  EXPECT_EQ(ckn::classify(CknParams::validate(3, 3.0, 4.0, 0.5)), Classification::kInconclusive);
  EXPECT_EQ(ckn::classify(CknParams::validate(3, 2.0, 4.0, 0.0)), Classification::kRadialProved);
}

TEST(Classify, StringRoundTrip) {
  for (auto c : {Classification::kSymmetryBreaking, Classification::kRadialProved, Classification::kInconclusive})
    EXPECT_EQ(ckn::classification_from_string(ckn::to_string(c)), c);
  EXPECT_THROW(ckn::classification_from_string("MAYBE"), std::exception);
}

// Independent statement of the p = 2 breaking region:
// (n-2+a)^2/4 > (n-1)(1/(q-2) - 1/(q+2)).
TEST(Classify, AgreesWithIndependentQuadraticRegion) {
  for (int n : {3, 4}) {
    const double p_star = 2.0 * n / (n - 2.0);
    for (int i = 0; i < 20; ++i) {
      const double q = 2.0 + (p_star - 2.0) * (i + 0.5) / 20.0;
      for (int j = 0; j < 20; ++j) {
        const double a = 2.0 - n + 0.05 + 6.0 * j / 19.0;
        const double lhs = (n - 2.0 + a) * (n - 2.0 + a) / 4.0;
        const double rhs = (n - 1.0) * (1.0 / (q - 2.0) - 1.0 / (q + 2.0));
        const auto params = CknParams::validate(n, 2.0, q, a);
        EXPECT_EQ(ckn::discriminant_D(params) < 0.0, lhs > rhs) << "n=" << n << " q=" << q << " a=" << a;
      }
    }
  }
}
