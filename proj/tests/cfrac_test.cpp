// Copyright 2026 The qcps Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcps/cfrac.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"

namespace qcps {
namespace {

// First n partial quotients by floor-and-invert in 256-bit floats.
std::vector<long long> float_quotients(const QuadNum& x, int n) {
  BigFloat v = to_bigfloat(x.a()) + to_bigfloat(x.b()) * mp::sqrt(BigFloat(x.d()));
  std::vector<long long> out;
  for (int i = 0; i < n; ++i) {
    const BigFloat f = mp::floor(v);
    out.push_back(f.convert_to<long long>());
    v = 1 / (v - f);
  }
  return out;
}

TEST(CfExpand, KnownExpansions) {
  EXPECT_EQ(cf_expand(QuadNum::parse("1/2+1/2*sqrt(5)")).str(), "[1;(1)]");
  EXPECT_EQ(cf_expand(QuadNum::parse("1+1*sqrt(2)")).str(), "[2;(2)]");
  EXPECT_EQ(cf_expand(QuadNum::sqrt(3)).str(), "[1;(1 2)]");
  EXPECT_EQ(cf_expand(QuadNum::sqrt(7)).str(), "[2;(1 1 1 4)]");
  EXPECT_EQ(cf_expand(QuadNum::parse("1/4+1/4*sqrt(5)")).str(), "[0; 1, (4)]");
}

TEST(CfExpand, RationalInputIsRejected) {
  EXPECT_THROW((void)cf_expand(QuadNum::rational(3, 4)), DomainError);
}

TEST(CfExpand, QuotientsMatchFloatOracle) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 60; ++i) {
    const long long d = std::vector<long long>{2, 3, 5, 6, 7, 13}[i % 6];
    QuadNum x = testing::random_quad(rng, d, 9, 7);
    if (x.is_rational()) continue;
    const CFExpansion cf = cf_expand(x);
    const auto oracle = float_quotients(x, 25);
    for (std::size_t k = 0; k < oracle.size(); ++k) {
      ASSERT_EQ(cf.quotient(k), BigInt(oracle[k])) << x << " index " << k;
    }
  }
}

TEST(CfValue, RoundTripExact) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 60; ++i) {
    const long long d = std::vector<long long>{2, 3, 5, 13}[i % 4];
    const QuadNum x = testing::random_quad(rng, d, 9, 7);
    if (x.is_rational()) continue;
    EXPECT_EQ(cf_value(cf_expand(x), d), x);
  }
  const QuadNum longp = QuadNum::parse("-3/7+2/5*sqrt(13)");
  const CFExpansion cf = cf_expand(longp);
  EXPECT_EQ(cf.period.size(), 178u);
  EXPECT_EQ(cf_value(cf, 13), longp);
}

TEST(CfConvergents, FibonacciAndBestApproximation) {
  const QuadNum tau = QuadNum::parse("1/2+1/2*sqrt(5)");
  const auto cv = cf_convergents(cf_expand(tau), 30);
  ASSERT_EQ(cv.size(), 31u);
  BigInt f0(1), f1(1);
  for (const auto& c : cv) {
    EXPECT_EQ(c.q, f0);
    EXPECT_EQ(c.p, f1);
    const BigInt f2 = f0 + f1;
    f0 = f1;
    f1 = f2;
    // |tau - p/q| < 1/q^2
    const QuadNum err = (tau - QuadNum(Rational(c.p, c.q))).abs();
    EXPECT_LT(err, QuadNum(Rational(BigInt(1), c.q * c.q)));
  }
}

TEST(CfBoundedQuotients, PeriodicIsBounded) {
  const auto b = cf_bounded_quotients(cf_expand(QuadNum::sqrt(3)));
  EXPECT_TRUE(b.bounded);
  EXPECT_EQ(b.c, BigInt(2));
  EXPECT_EQ(cf_bounded_quotients(cf_expand(QuadNum::parse("1/2+1/2*sqrt(5)"))).c, BigInt(1));
}

// S_m for tau: a_l = 1, q_l = F_{l+1}.
std::vector<long double> tau_sums_oracle(int m) {
  std::vector<long double> out;
  long double q0 = 1, q1 = 1, s = 0;
  for (int l = 0; l <= m; ++l) {
    s += static_cast<long double>(l + 1) / std::sqrt(q0);
    out.push_back(s);
    const long double q2 = q0 + q1;
    q0 = q1;
    q1 = q2;
  }
  return out;
}

TEST(GlCondition, TauPartialSums) {
  const GlSums g = gl_condition(cf_expand(QuadNum::parse("1/2+1/2*sqrt(5)")), 200);
  ASSERT_EQ(g.sums.size(), 201u);
  EXPECT_EQ(g.sums[0], BigFloat(1));
  EXPECT_EQ(g.sums[1], BigFloat(3));
  const auto oracle = tau_sums_oracle(200);
  for (int l = 0; l <= 200; ++l) {
    EXPECT_NEAR(g.sums[l].convert_to<double>(), static_cast<double>(oracle[l]), 1e-12);
  }
  EXPECT_TRUE(g.converged);
  EXPECT_GT(g.stabilized_at, 0);
  EXPECT_LE(g.stabilized_at, 200);
  EXPECT_NEAR(g.sums[200].convert_to<double>(), 25.641924764821694, 1e-12);
}

TEST(GlCondition, MajorantClosedForms) {
  const double t = (1 + std::sqrt(5.0)) / 2;
  const double base = 1 / std::pow(1 - 1 / std::sqrt(t), 2);
  EXPECT_NEAR(gl_majorant(BigInt(1)).convert_to<double>(), base, 1e-12);
  EXPECT_NEAR(gl_majorant(BigInt(2)).convert_to<double>(), 4 * base, 1e-11);
  EXPECT_NEAR(gl_majorant_shifted(BigInt(1)).convert_to<double>(), std::sqrt(t) * base, 1e-12);
}

TEST(GlCondition, ShiftedMajorantBoundsTauSums) {
  const GlSums g = gl_condition(cf_expand(QuadNum::parse("1/2+1/2*sqrt(5)")), 200);
  const BigFloat shifted = gl_majorant_shifted(BigInt(1));
  for (const auto& s : g.sums) EXPECT_LT(s, shifted);
  // The unshifted series is first exceeded at m = 13.
  const BigFloat plain = gl_majorant(BigInt(1));
  EXPECT_LT(g.sums[12], plain);
  EXPECT_GT(g.sums[13], plain);
}

}  // namespace
}  // namespace qcps
