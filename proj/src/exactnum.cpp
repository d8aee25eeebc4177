// Copyright 2026 The qcps Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcps/exactnum.hpp"

#include <gmp.h>

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>

namespace qcps {

BigInt floor_div(const BigInt& num, const BigInt& den) {
  if (den == 0) throw DivisionByZero("floor_div by zero");
  BigInt q;
  mpz_fdiv_q(q.backend().data(), num.backend().data(), den.backend().data());
  return q;
}

BigInt isqrt(const BigInt& n) {
  if (n < 0) throw DomainError("isqrt of a negative integer");
  BigInt r;
  mpz_sqrt(r.backend().data(), n.backend().data());
  return r;
}

bool is_square_free(long long n) {
  if (n < 1) return false;
  for (long long p = 2; p * p <= n; ++p) {
    if (n % (p * p) == 0) return false;
  }
  return true;
}

BigFloat to_bigfloat(const Rational& q) { return BigFloat(q); }

BigFloat sqrt_bigfloat(long long d) {
  static std::mutex mu;
  static std::map<long long, BigFloat> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(d);
  if (it != cache.end()) return it->second;
  BigFloat s = mp::sqrt(BigFloat(d));
  cache.emplace(d, s);
  return s;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

namespace {

// n = k^2 * d with d square-free.
std::pair<long long, long long> split_square(long long n) {
  long long k = 1;
  long long d = n;
  for (long long p = 2; p * p <= d; ++p) {
    while (d % (p * p) == 0) {
      d /= p * p;
      k *= p;
    }
  }
  return {k, d};
}

Rational pow2(long long e) {
  BigInt p = 1;
  p <<= static_cast<unsigned>(e < 0 ? -e : e);
  return e < 0 ? Rational(BigInt(1), p) : Rational(p);
}

}  // namespace

QuadNum::QuadNum(Rational a, Rational b, long long d)
    : a_(std::move(a)), b_(std::move(b)), d_(d) {
  if (d_ == 0) {
    if (b_ != 0) throw DomainError("QuadNum with b != 0 needs a field d");
    return;
  }
  if (d_ < 2 || !is_square_free(d_)) {
    throw DomainError("field discriminant must be a square-free integer > 1, got " +
                      std::to_string(d_));
  }
}

QuadNum QuadNum::sqrt(long long n) {
  if (n < 0) throw DomainError("sqrt of a negative integer is not real");
  if (n == 0) return QuadNum();
  auto [k, d] = split_square(n);
  if (d == 1) return QuadNum(Rational(k));
  return QuadNum(Rational(0), Rational(k), d);
}

QuadNum QuadNum::rational(long long p, long long q) {
  if (q == 0) throw DivisionByZero("rational with zero denominator");
  return QuadNum(Rational(p, q));
}

long long QuadNum::join_field(const QuadNum& o) const {
  if (d_ == 0) return o.d_;
  if (o.d_ == 0 || o.d_ == d_) return d_;
  throw FieldMismatch("mixed fields Q(sqrt " + std::to_string(d_) + ") and Q(sqrt " +
                      std::to_string(o.d_) + ")");
}

QuadNum QuadNum::operator-() const {
  QuadNum r = *this;
  r.a_ = -r.a_;
  r.b_ = -r.b_;
  return r;
}

QuadNum& QuadNum::operator+=(const QuadNum& o) {
  d_ = join_field(o);
  a_ += o.a_;
  b_ += o.b_;
  return *this;
}

QuadNum& QuadNum::operator-=(const QuadNum& o) {
  d_ = join_field(o);
  a_ -= o.a_;
  b_ -= o.b_;
  return *this;
}

QuadNum& QuadNum::operator*=(const QuadNum& o) {
  const long long d = join_field(o);
  if (b_ == 0 && o.b_ == 0) {
    a_ *= o.a_;
  } else if (o.b_ == 0) {
    a_ *= o.a_;
    b_ *= o.a_;
  } else if (b_ == 0) {
    b_ = a_ * o.b_;
    a_ *= o.a_;
  } else {
    Rational na = a_ * o.a_ + Rational(d) * b_ * o.b_;
    Rational nb = a_ * o.b_ + b_ * o.a_;
    a_ = std::move(na);
    b_ = std::move(nb);
  }
  d_ = d;
  return *this;
}

QuadNum& QuadNum::operator/=(const QuadNum& o) {
  const long long d = join_field(o);
  if (o.is_zero()) throw DivisionByZero("QuadNum division by zero");
  if (o.b_ == 0) {
    a_ /= o.a_;
    b_ /= o.a_;
    d_ = d;
    return *this;
  }
  const Rational n = o.norm();
  *this *= o.conjugate();
  a_ /= n;
  b_ /= n;
  d_ = d;
  return *this;
}

QuadNum QuadNum::conjugate() const {
  QuadNum r = *this;
  r.b_ = -r.b_;
  return r;
}

Rational QuadNum::norm() const { return a_ * a_ - Rational(d_) * b_ * b_; }

int QuadNum::sign() const {
  const int sa = a_.sign();
  const int sb = b_.sign();
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  // Opposite signs: |a| vs |b| sqrt(d) decided by a^2 vs d b^2.
  const Rational lhs = a_ * a_;
  const Rational rhs = Rational(d_) * b_ * b_;
  return lhs > rhs ? sa : sb;
}

BigInt QuadNum::floor() const {
  // Write x = (A + B sqrt d) / Q with integers, Q > 0.
  const BigInt da = mp::denominator(a_);
  const BigInt db = mp::denominator(b_);
  BigInt q;
  mpz_lcm(q.backend().data(), da.backend().data(), db.backend().data());
  const BigInt A = mp::numerator(a_) * (q / da);
  if (b_ == 0) return floor_div(A, q);
  const BigInt B = mp::numerator(b_) * (q / db);
  // B sqrt d is irrational, so it lies strictly between r and r + 1
  // (or -r-1 and -r when B < 0); no multiple of q separates those bounds.
  const BigInt r = isqrt(B * B * d_);
  if (B > 0) return floor_div(A + r, q);
  return floor_div(A - r - 1, q);
}

BigInt QuadNum::ceil() const { return -(-*this).floor(); }

QuadNum QuadNum::frac() const { return *this - QuadNum(Rational(floor())); }

FloatApprox QuadNum::to_float(int bits) const {
  if (bits < 24 || bits > 256) throw DomainError("precision_bits must lie in [24, 256]");
  if (is_zero()) return {BigFloat(0), BigFloat(0)};
  const QuadNum ax = abs();
  int e = 0;
  mp::frexp(ax.to_bigfloat(), &e);
  long long exp2 = e - 1;
  // Exact correction of the float estimate: 2^exp2 <= |x| < 2^(exp2+1).
  while (ax < QuadNum(pow2(exp2))) --exp2;
  while (ax >= QuadNum(pow2(exp2 + 1))) ++exp2;
  const long long k = bits - 1 - exp2;
  const QuadNum scaled = ax * QuadNum(pow2(k));
  BigInt n = scaled.floor();
  const int cmp = (scaled - QuadNum(Rational(n)) - QuadNum::rational(1, 2)).sign();
  if (cmp > 0 || (cmp == 0 && mp::bit_test(n, 0))) n += 1;
  BigFloat v = mp::ldexp(BigFloat(n), static_cast<int>(-k));
  if (sign() < 0) v = -v;
  return {v, mp::ldexp(BigFloat(1), static_cast<int>(-k - 1))};
}

double QuadNum::to_double() const {
  if (b_ == 0) return a_.convert_to<double>();
  return to_float(53).value.convert_to<double>();
}

double QuadNum::approx() const {
  const double a = a_.convert_to<double>();
  if (b_ == 0) return a;
  const double b = b_.convert_to<double>() * std::sqrt(static_cast<double>(d_));
  const double v = a + b;
  // Heavy cancellation between the parts: fall back to correct rounding.
  if (std::abs(v) < 1e-6 * (std::abs(a) + std::abs(b))) return to_double();
  return v;
}

double QuadNum::approx_error() const {
  const double a = std::abs(a_.convert_to<double>());
  if (b_ == 0) return 1e-15 * a;
  return 1e-14 * (a + std::abs(b_.convert_to<double>()) * std::sqrt(static_cast<double>(d_)));
}

BigFloat QuadNum::to_bigfloat() const {
  BigFloat v(a_);
  if (b_ != 0) v += BigFloat(b_) * sqrt_bigfloat(d_);
  return v;
}

bool operator==(const QuadNum& x, const QuadNum& y) {
  if (x.a_ != y.a_ || x.b_ != y.b_) return false;
  return x.b_ == 0 || x.d_ == y.d_;
}

std::strong_ordering operator<=>(const QuadNum& x, const QuadNum& y) {
  const int s = (x - y).sign();
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string QuadNum::str() const {
  if (b_ == 0) return a_.str();
  std::string out = a_.str();
  out += b_ > 0 ? '+' : '-';
  out += mp::abs(b_).str();
  out += "*sqrt(" + std::to_string(d_) + ")";
  return out;
}

std::ostream& operator<<(std::ostream& os, const QuadNum& x) { return os << x.str(); }

// Recursive-descent parser for the QuadNum text syntax.
namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  QuadNum parse() {
    skip_ws();
    if (pos_ == s_.size()) fail("empty number");
    int sign = 1;
    if (peek() == '+' || peek() == '-') {
      sign = get() == '-' ? -1 : 1;
      skip_ws();
    }
    add_term(sign);
    for (;;) {
      skip_ws();
      if (pos_ == s_.size()) break;
      const char c = get();
      if (c != '+' && c != '-') fail(std::string("unexpected '") + c + "'");
      skip_ws();
      add_term(c == '-' ? -1 : 1);
    }
    if (d_ == 0) return QuadNum(rat_);
    return QuadNum(rat_, irr_, d_);
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  char get() { return s_[pos_++]; }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("QuadNum parse error at offset " + std::to_string(pos_) + ": " + msg, pos_);
  }

  BigInt uint() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return BigInt(std::string(s_.substr(start, pos_ - start)));
  }

  bool try_word(std::string_view w) {
    if (s_.substr(pos_, w.size()) == w) {
      pos_ += w.size();
      return true;
    }
    return false;
  }

  long long radicand() {
    skip_ws();
    if (!try_word("(")) fail("expected '(' after sqrt");
    skip_ws();
    const BigInt n = uint();
    skip_ws();
    if (!try_word(")")) fail("expected ')'");
    if (n > BigInt(1'000'000'000'000LL)) fail("radicand too large");
    return n.convert_to<long long>();
  }

  void add_term(int sign) {
    Rational coef(1);
    bool has_coef = false;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      BigInt p = uint();
      BigInt q = 1;
      skip_ws();
      if (peek() == '/') {
        ++pos_;
        skip_ws();
        q = uint();
        if (q == 0) fail("zero denominator");
      }
      coef = Rational(p, q);
      has_coef = true;
      skip_ws();
      if (peek() != '*') {
        rat_ += sign * coef;
        return;
      }
      ++pos_;
      skip_ws();
    }
    if (!try_word("sqrt")) fail(has_coef ? "expected sqrt after '*'" : "expected a number");
    const long long n = radicand();
    const QuadNum root = QuadNum::sqrt(n);
    coef *= sign;
    if (root.is_rational()) {
      rat_ += coef * root.a();
      return;
    }
    if (d_ != 0 && d_ != root.d()) fail("terms from different quadratic fields");
    d_ = root.d();
    irr_ += coef * root.b();
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  Rational rat_;
  Rational irr_;
  long long d_ = 0;
};

}  // namespace

QuadNum QuadNum::parse(std::string_view text) { return Parser(text).parse(); }

}  // namespace qcps
