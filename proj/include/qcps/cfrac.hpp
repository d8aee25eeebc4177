// Copyright 2026 The qcps Authors
// SPDX-License-Identifier: Apache-2.0

// Continued fractions of real quadratic irrationals.

#pragma once

#include <string>
#include <vector>

#include "qcps/exactnum.hpp"

namespace qcps {

struct CFExpansion {
  /// a_0, ..., a_{k-1}; never empty (a_0 is always listed here).
  std::vector<BigInt> preperiod;
  /// Minimal repeating block.
  std::vector<BigInt> period;

  /// Partial quotient a_i for any i >= 0.
  const BigInt& quotient(std::size_t i) const;
  /// "[a0; a1, (b1 b2)]"; "[1;(1)]" when the preperiod is just a0.
  std::string str() const;

  friend bool operator==(const CFExpansion&, const CFExpansion&) = default;
};

struct Convergent {
  long long index;
  BigInt p;
  BigInt q;
};

/// Expansion by the (P + sqrt D)/Q surd recursion with exact cycle detection.
CFExpansion cf_expand(const QuadNum& x);

/// Value of a periodic expansion in Q(sqrt d), solving the quadratic of the
/// periodic tail.
QuadNum cf_value(const CFExpansion& cf, long long d);

/// Rows 0..m of p_l/q_l with p_{-1} = 1, q_{-1} = 0, q_0 = 1.
std::vector<Convergent> cf_convergents(const CFExpansion& cf, long long m);

struct QuotientBound {
  bool bounded = true;
  BigInt c;
};

QuotientBound cf_bounded_quotients(const CFExpansion& cf);

struct GlSums {
  /// S_0, ..., S_m.
  std::vector<BigFloat> sums;
  /// First m with S_m - S_{m-window} < tol, or -1.
  long long stabilized_at = -1;
  bool converged = false;
};

inline constexpr int kGlWindow = 50;
inline constexpr double kGlTolerance = 1e-9;

/// S_m = sum_{l=0}^{m} a_{l+1} q_l^{-1/2} (a_1 + ... + a_{l+1}).
GlSums gl_condition(const CFExpansion& cf, long long m);

/// c^2 / (1 - tau^{-1/2})^2 = sum_l c (l+1) c tau^{-l/2}.
BigFloat gl_majorant(const BigInt& c);
/// Same series multiplied by sqrt(tau), using q_l >= tau^{l-1}.
BigFloat gl_majorant_shifted(const BigInt& c);

}  // namespace qcps
