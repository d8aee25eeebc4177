// Copyright 2026 The qcps Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcps/exactnum.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"

namespace qcps {
namespace {

using testing::newton_isqrt;
using testing::random_quad;

const QuadNum kTau = QuadNum::parse("1/2+1/2*sqrt(5)");

TEST(QuadNum, GoldenRatioIdentities) {
  EXPECT_EQ(kTau * kTau, kTau + QuadNum(1));
  EXPECT_EQ(kTau * kTau.conjugate(), QuadNum(-1));
  EXPECT_EQ(kTau.norm(), Rational(-1));
  EXPECT_EQ(QuadNum(1) / kTau, kTau - QuadNum(1));
}

TEST(QuadNum, SqrtReducesSquareFactors) {
  EXPECT_EQ(QuadNum::sqrt(20), QuadNum(Rational(0), Rational(2), 5));
  EXPECT_EQ(QuadNum::sqrt(49), QuadNum(7));
  EXPECT_TRUE(QuadNum::sqrt(16).is_rational());
}

TEST(QuadNum, FloorMatchesNewtonOracle) {
  // floor(10^30 sqrt 5) from integer Newton.
  BigInt scale(1);
  for (int i = 0; i < 30; ++i) scale *= 10;
  const BigInt expect = newton_isqrt(BigInt(5) * scale * scale);
  EXPECT_EQ((QuadNum::sqrt(5) * QuadNum(Rational(scale))).floor(), expect);
  EXPECT_EQ((-QuadNum::sqrt(5) * QuadNum(Rational(scale))).floor(), -expect - 1);
}

TEST(QuadNum, SignAgreesWithHighPrecisionEvaluation) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const long long d = std::vector<long long>{2, 3, 5, 7, 13}[i % 5];
    const QuadNum x = random_quad(rng, d);
    const BigFloat v = to_bigfloat(x.a()) + to_bigfloat(x.b()) * mp::sqrt(BigFloat(d));
    const int expect = v > 0 ? 1 : (v < 0 ? -1 : 0);
    ASSERT_EQ(x.sign(), expect) << x;
  }
}

TEST(QuadNum, NearCancellationSign) {
  // x^2 - 5 y^2 = 1, so x - y sqrt 5 = 1 / (x + y sqrt 5) ~ 5e-12.
  const QuadNum x(Rational(BigInt("96450076809")), Rational(BigInt("-43133785636")), 5);
  EXPECT_EQ(x.sign(), 1);
  EXPECT_EQ((-x).sign(), -1);
  EXPECT_EQ(x.norm(), Rational(1));
}

TEST(QuadNum, FloorCeilFracProperties) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const QuadNum x = random_quad(rng, 5);
    const QuadNum f(Rational(x.floor()));
    EXPECT_LE(f, x);
    EXPECT_LT(x, f + QuadNum(1));
    const QuadNum fr = x.frac();
    EXPECT_GE(fr.sign(), 0);
    EXPECT_LT(fr, QuadNum(1));
    EXPECT_EQ(x - fr, f);
    const QuadNum c(Rational(x.ceil()));
    EXPECT_GE(c, x);
    EXPECT_LT(c - QuadNum(1), x);
  }
}

TEST(QuadNum, ParseAndPrintRoundTrip) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const QuadNum x = random_quad(rng, 13);
    EXPECT_EQ(QuadNum::parse(x.str()), x);
  }
  EXPECT_EQ(QuadNum::parse("0+1*sqrt(2)").str(), "0+1*sqrt(2)");
  EXPECT_EQ(QuadNum::parse("3/4"), QuadNum::rational(3, 4));
  EXPECT_EQ(QuadNum::parse("1/2+1/2*sqrt(5)"), kTau);
}

TEST(QuadNum, ParseErrorsCarryOffset) {
  try {
    (void)QuadNum::parse("1/2+*sqrt(5)");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
  }
  EXPECT_THROW((void)QuadNum::parse(""), ParseError);
  EXPECT_THROW((void)QuadNum::parse("1/0"), Error);
}

TEST(QuadNum, FieldMismatchAndDivisionByZero) {
  EXPECT_THROW((void)(QuadNum::sqrt(2) + QuadNum::sqrt(3)), FieldMismatch);
  EXPECT_THROW((void)(kTau / QuadNum(0)), DivisionByZero);
  // Rationals combine with any field.
  EXPECT_EQ((QuadNum::rational(1, 2) + QuadNum::sqrt(3)).d(), 3);
}

TEST(QuadNum, ToDoubleIsCorrectlyRounded) {
  EXPECT_EQ(kTau.to_double(), (1.0 + std::sqrt(5.0)) / 2.0);
  EXPECT_EQ(QuadNum::sqrt(2).to_double(), std::sqrt(2.0));
  const FloatApprox f = QuadNum::sqrt(5).to_float(200);
  EXPECT_LT(f.abs_error, BigFloat(1e-59));
  EXPECT_LT(mp::abs(f.value - mp::sqrt(BigFloat(5))), BigFloat(1e-59));
}

TEST(QuadNum, ApproxSurvivesCancellation) {
  // a and b near 1e20, value near 5e-3.
  const QuadNum x(Rational(BigInt("96450076809000000000")),
                  Rational(BigInt("-43133785636000000000")), 5);
  EXPECT_NEAR(x.approx(), x.to_double(), 1e-12);
  EXPECT_GE(x.approx(), 0.0);
  EXPECT_LT(x.approx(), 1.0);
}

TEST(QuadNum, OrderingIsTotal) {
  std::mt19937_64 rng(5);
  std::vector<QuadNum> v;
  for (int i = 0; i < 200; ++i) v.push_back(random_quad(rng, 5));
  std::sort(v.begin(), v.end());
  for (std::size_t i = 1; i < v.size(); ++i) {
    EXPECT_LE(v[i - 1].to_double(), v[i].to_double());
  }
}

TEST(IntegerHelpers, FloorDivAndSquareFree) {
  EXPECT_EQ(floor_div(BigInt(-7), BigInt(2)), BigInt(-4));
  EXPECT_EQ(floor_div(BigInt(7), BigInt(-2)), BigInt(-4));
  EXPECT_EQ(floor_div(BigInt(6), BigInt(3)), BigInt(2));
  for (long long n = 0; n < 2000; ++n) {
    EXPECT_EQ(isqrt(BigInt(n)), newton_isqrt(BigInt(n)));
  }
  EXPECT_TRUE(is_square_free(30));
  EXPECT_FALSE(is_square_free(12));
}

TEST(IntegerHelpers, FormatDoubleIsShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(100000.0), "1e+05");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

}  // namespace
}  // namespace qcps
