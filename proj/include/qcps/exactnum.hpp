// Copyright 2026 The qcps Authors
// SPDX-License-Identifier: Apache-2.0

// Exact arithmetic over Q and real quadratic fields Q(sqrt d).
//
// Every comparison the library makes (window membership, orbit wrap
// ordering, clipping) goes through QuadNum::sign(), which is decided with
// integer arithmetic only. Floating point values appear only through the
// explicit conversion helpers at the bottom of QuadNum.

#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qcps {

namespace mp = boost::multiprecision;

using BigInt = mp::number<mp::gmp_int, mp::et_off>;
using Rational = mp::number<mp::gmp_rational, mp::et_off>;
/// 256-bit binary float used by every numeric (non-exact) path.
using BigFloat = mp::number<mp::cpp_bin_float<256, mp::digit_base_2>, mp::et_off>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text or file input.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, std::size_t offset = 0)
      : Error(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Well-formed input that violates a mathematical precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

class FieldMismatch : public DomainError {
 public:
  using DomainError::DomainError;
};

class DivisionByZero : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A numeric path missed its certified tolerance.
class ToleranceError : public Error {
 public:
  using Error::Error;
};

/// Rounded value together with a bound on |value - exact|.
struct FloatApprox {
  BigFloat value;
  BigFloat abs_error;
};

// a + b*sqrt(d). A value with b == 0 may carry d == 0 ("no field yet");
// such rationals combine with elements of any field.
class QuadNum {
 public:
  QuadNum() = default;
  QuadNum(long long v) : a_(v) {}  // NOLINT(google-explicit-constructor)
  QuadNum(Rational a) : a_(std::move(a)) {}  // NOLINT(google-explicit-constructor)
  QuadNum(Rational a, Rational b, long long d);

  /// sqrt(n) reduced to k*sqrt(d) with d square-free; rational when n is a square.
  static QuadNum sqrt(long long n);
  static QuadNum rational(long long p, long long q = 1);

  /// Parses "a+b*sqrt(d)" with rationals written "p/q". Sums of several
  /// terms over the same radicand are accepted; output of str() is canonical.
  static QuadNum parse(std::string_view text);
  std::string str() const;

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  long long d() const { return d_; }
  bool is_rational() const { return b_ == 0; }
  bool is_zero() const { return a_ == 0 && b_ == 0; }

  QuadNum conjugate() const;
  /// a^2 - d b^2, the field norm.
  Rational norm() const;
  int sign() const;
  BigInt floor() const;
  BigInt ceil() const;
  QuadNum abs() const { return sign() < 0 ? -*this : *this; }
  /// Fractional part x - floor(x), in [0,1).
  QuadNum frac() const;

  /// Correctly rounded to `bits` significant bits (24 <= bits <= 256).
  FloatApprox to_float(int bits) const;
  double to_double() const;
  /// Plain double evaluation for sorting keys; may be off by a few ulps.
  double approx() const;
  /// Bound on |approx() - value| (loose, for filtering exact comparisons).
  double approx_error() const;
  /// Fast 256-bit evaluation (not correctly rounded; error ~ 2^-250 |x|).
  BigFloat to_bigfloat() const;

  QuadNum operator-() const;
  QuadNum& operator+=(const QuadNum& o);
  QuadNum& operator-=(const QuadNum& o);
  QuadNum& operator*=(const QuadNum& o);
  QuadNum& operator/=(const QuadNum& o);

  friend QuadNum operator+(QuadNum x, const QuadNum& y) { return x += y; }
  friend QuadNum operator-(QuadNum x, const QuadNum& y) { return x -= y; }
  friend QuadNum operator*(QuadNum x, const QuadNum& y) { return x *= y; }
  friend QuadNum operator/(QuadNum x, const QuadNum& y) { return x /= y; }

  friend bool operator==(const QuadNum& x, const QuadNum& y);
  friend std::strong_ordering operator<=>(const QuadNum& x, const QuadNum& y);

 private:
  long long join_field(const QuadNum& o) const;

  Rational a_;
  Rational b_;
  long long d_ = 0;
};

std::ostream& operator<<(std::ostream& os, const QuadNum& x);

// Integer helpers shared by the continued fraction code.
BigInt floor_div(const BigInt& num, const BigInt& den);
BigInt isqrt(const BigInt& n);
bool is_square_free(long long n);

BigFloat to_bigfloat(const Rational& q);
BigFloat sqrt_bigfloat(long long d);
/// Shortest round-trip decimal text of a double, locale independent.
std::string format_double(double v);

}  // namespace qcps
