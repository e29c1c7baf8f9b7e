#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "ckn/errors.hpp"
#include "ckn/special_functions.hpp"

TEST(LogGamma, ExactAtOneAndTwo) {
  EXPECT_EQ(ckn::log_gamma(1.0), 0.0);
  EXPECT_EQ(ckn::log_gamma(2.0), 0.0);
}

TEST(LogGamma, MatchesStdLgammaAcrossRange) {
  for (double x = 0.01; x < 170.0; x *= 1.07) {
    const double ref = std::lgamma(x);
    EXPECT_NEAR(ckn::log_gamma(x), ref, 1e-13 * std::max(1.0, std::abs(ref))) << "x=" << x;
  }
}

TEST(LogGamma, HighPrecisionValues) {
  EXPECT_NEAR(ckn::log_gamma(0.1), 2.2527126517342059599, 1e-14);
  EXPECT_NEAR(ckn::log_gamma(50.5), 146.51925549072062722, 1e-12);
  EXPECT_NEAR(ckn::log_gamma(0.5), 0.5 * std::log(std::numbers::pi), 1e-15);
}

TEST(LogGamma, RejectsNonPositive) {
  EXPECT_THROW(ckn::log_gamma(0.0), ckn::DomainError);
  EXPECT_THROW(ckn::log_gamma(-1.5), ckn::DomainError);
}

TEST(Beta, ClosedFormCases) {
  EXPECT_NEAR(ckn::beta(2.0, 2.0), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(ckn::beta(0.5, 0.5), std::numbers::pi, 1e-14);
  EXPECT_NEAR(ckn::beta(2.5, 1.5), 0.1963495408493620774, 1e-15);
}

TEST(Beta, SymmetricBitForBit) {
  for (double x : {0.3, 1.7, 12.5})
    for (double y : {0.05, 2.0, 40.0}) EXPECT_EQ(ckn::beta(x, y), ckn::beta(y, x));
}

TEST(Beta, RecurrenceInFirstArgument) {
  for (double x : {0.4, 1.3, 7.0}) {
    const double y = 2.6;
    EXPECT_NEAR(ckn::beta(x + 1.0, y), ckn::beta(x, y) * x / (x + y), 1e-14 * ckn::beta(x, y));
  }
}
