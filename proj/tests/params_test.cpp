#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "ckn/errors.hpp"
#include "ckn/params.hpp"

using ckn::CknParams;
using ckn::DomainError;
using ckn::DomainReason;

namespace {

DomainReason reason_of(int n, double p, double q, double a) {
  try {
    CknParams::validate(n, p, q, a);
  } catch (const DomainError& e) {
    return e.reason();
  }
  ADD_FAILURE() << "no DomainError";
  return DomainReason::kNonFinite;
}

}  // namespace

TEST(Params, AcceptsInteriorTuple) {
  const auto p = CknParams::validate(3, 2.0, 4.0, 0.0);
  EXPECT_EQ(p.n(), 3);
  EXPECT_EQ(p.q(), 4.0);
}

TEST(Params, RejectionReasons) {
  EXPECT_EQ(reason_of(1, 2.0, 3.0, 0.0), DomainReason::kDimensionTooSmall);
  EXPECT_EQ(reason_of(3, 1.0, 3.0, 0.0), DomainReason::kPNotAboveOne);
  EXPECT_EQ(reason_of(3, 2.0, 2.0, 0.0), DomainReason::kQNotAboveP);
  EXPECT_EQ(reason_of(3, 2.0, 6.0, 0.0), DomainReason::kQNotBelowCritical);
  EXPECT_EQ(reason_of(3, 2.0, 7.0, 0.0), DomainReason::kQNotBelowCritical);
  EXPECT_EQ(reason_of(3, 2.0, 3.0, -1.0), DomainReason::kWeightNotAboveHardy);
  EXPECT_EQ(reason_of(3, 2.0, 3.0, std::nan("")), DomainReason::kNonFinite);
}

TEST(Params, ReasonCodesAreStable) {
  EXPECT_EQ(ckn::reason_code(DomainReason::kQNotBelowCritical), "q_ge_pstar");
  EXPECT_EQ(ckn::reason_code(DomainReason::kWeightNotAboveHardy), "a_le_p_minus_n");
}

TEST(Params, NoUpperExponentWhenPAtLeastN) {
  EXPECT_TRUE(std::isinf(ckn::critical_exponent(2, 2.0)));
  EXPECT_TRUE(std::isinf(ckn::critical_exponent(3, 3.5)));
  EXPECT_NO_THROW(CknParams::validate(2, 2.0, 50.0, 0.5));
  EXPECT_DOUBLE_EQ(ckn::critical_exponent(3, 2.0), 6.0);
}

TEST(Params, DerivedQuantities) {
  const auto d = ckn::derive(CknParams::validate(3, 2.0, 4.0, 0.0));
  EXPECT_DOUBLE_EQ(d.H, 0.5);
  EXPECT_DOUBLE_EQ(d.Q, 2.0);
  EXPECT_DOUBLE_EQ(d.gamma, 1.0);
  EXPECT_DOUBLE_EQ(d.b_a, 1.0);
  EXPECT_NEAR(d.C, std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(d.omega, 4.0 * std::numbers::pi, 1e-13);
  EXPECT_NEAR(ckn::derive(CknParams::validate(2, 2.0, 3.0, 0.5)).omega, 2.0 * std::numbers::pi, 1e-13);
}

TEST(Params, HardyConstant) {
  EXPECT_DOUBLE_EQ(ckn::hardy_constant(CknParams::validate(3, 2.0, 4.0, 0.0)), 0.25);
}

TEST(Params, WithWeightRevalidates) {
  const auto p = CknParams::validate(3, 2.0, 4.0, 0.0);
  EXPECT_EQ(p.with_weight(1.5).a(), 1.5);
  EXPECT_THROW(p.with_weight(-1.0), DomainError);
}
