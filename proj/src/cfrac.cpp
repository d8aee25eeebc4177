// Copyright 2026 The qcps Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcps/cfrac.hpp"

#include <map>
#include <utility>

namespace qcps {

const BigInt& CFExpansion::quotient(std::size_t i) const {
  if (i < preperiod.size()) return preperiod[i];
  if (period.empty()) throw DomainError("finite continued fraction has no quotient " +
                                        std::to_string(i));
  return period[(i - preperiod.size()) % period.size()];
}

std::string CFExpansion::str() const {
  std::string out = "[";
  out += preperiod.empty() ? std::string("0") : preperiod[0].str();
  out += ";";
  for (std::size_t i = 1; i < preperiod.size(); ++i) out += " " + preperiod[i].str() + ",";
  if (preperiod.size() > 1) out += " ";
  out += "(";
  for (std::size_t i = 0; i < period.size(); ++i) {
    if (i) out += " ";
    out += period[i].str();
  }
  out += ")]";
  return out;
}

namespace {

// floor((P + sqrt D) / Q) for non-square D.
BigInt surd_floor(const BigInt& p, const BigInt& q, const BigInt& d) {
  const BigInt r = isqrt(d);
  return q > 0 ? floor_div(p + r, q) : floor_div(p + r + 1, q);
}

void minimize(CFExpansion& cf) {
  const std::size_t n = cf.period.size();
  for (std::size_t len = 1; len < n; ++len) {
    if (n % len) continue;
    bool ok = true;
    for (std::size_t i = len; i < n && ok; ++i) ok = cf.period[i] == cf.period[i - len];
    if (ok) {
      cf.period.resize(len);
      break;
    }
  }
  // Rotate the period left into the preperiod while it still repeats.
  while (cf.preperiod.size() > 1 && cf.preperiod.back() == cf.period.back()) {
    cf.period.insert(cf.period.begin(), cf.period.back());
    cf.period.pop_back();
    cf.preperiod.pop_back();
  }
}

}  // namespace

CFExpansion cf_expand(const QuadNum& x) {
  if (x.is_rational()) throw DomainError("continued fraction expansion needs an irrational input");
  // x = (A + B sqrt d) / C with integers, C > 0.
  const BigInt da = mp::denominator(x.a());
  const BigInt db = mp::denominator(x.b());
  const BigInt c = da * db;
  const BigInt a = mp::numerator(x.a()) * db;
  const BigInt b = mp::numerator(x.b()) * da;
  // Move B under the root: x = (P + sqrt D) / Q.
  BigInt p = b > 0 ? a : -a;
  BigInt q = b > 0 ? c : -c;
  BigInt dd = b * b * x.d();
  if ((dd - p * p) % q != 0) {
    const BigInt aq = mp::abs(q);
    p *= aq;
    dd *= q * q;
    q *= aq;
  }

  CFExpansion cf;
  std::vector<BigInt> quotients;
  std::map<std::pair<BigInt, BigInt>, std::size_t> seen;
  for (std::size_t i = 0;; ++i) {
    if (i > 0) {
      auto [it, fresh] = seen.emplace(std::make_pair(p, q), i);
      if (!fresh) {
        const std::size_t j = it->second;
        cf.preperiod.assign(quotients.begin(), quotients.begin() + static_cast<long>(j));
        cf.period.assign(quotients.begin() + static_cast<long>(j), quotients.end());
        break;
      }
    }
    const BigInt ai = surd_floor(p, q, dd);
    quotients.push_back(ai);
    p = ai * q - p;
    q = (dd - p * p) / q;
  }
  minimize(cf);
  return cf;
}

namespace {

// (p_n, p_{n-1}, q_n, q_{n-1}) for the block of quotients.
struct Mobius {
  BigInt p1 = 1, p0 = 0, q1 = 0, q0 = 1;
  void push(const BigInt& a) {
    BigInt np = a * p1 + p0;
    BigInt nq = a * q1 + q0;
    p0 = std::move(p1);
    q0 = std::move(q1);
    p1 = std::move(np);
    q1 = std::move(nq);
  }
  QuadNum apply(const QuadNum& y) const {
    return (QuadNum(Rational(p1)) * y + QuadNum(Rational(p0))) /
           (QuadNum(Rational(q1)) * y + QuadNum(Rational(q0)));
  }
};

}  // namespace

QuadNum cf_value(const CFExpansion& cf, long long d) {
  if (cf.period.empty()) throw DomainError("expansion has no period");
  Mobius per;
  for (const auto& a : cf.period) per.push(a);
  // y = (p y + p') / (q y + q')  =>  q y^2 + (q' - p) y - p' = 0, take y > 1.
  const BigInt disc = (per.q0 - per.p1) * (per.q0 - per.p1) + 4 * per.q1 * per.p0;
  // disc = k^2 d for the field of the expansion.
  if (d < 2 || disc % d != 0) throw DomainError("expansion does not lie in Q(sqrt " + std::to_string(d) + ")");
  const BigInt k2 = disc / d;
  const BigInt k = isqrt(k2);
  if (k * k != k2) throw DomainError("expansion does not lie in Q(sqrt " + std::to_string(d) + ")");
  const QuadNum root(Rational(0), Rational(k), d);
  const QuadNum y = (QuadNum(Rational(per.p1 - per.q0)) + root) / QuadNum(Rational(2 * per.q1));
  Mobius pre;
  for (const auto& a : cf.preperiod) pre.push(a);
  return pre.apply(y);
}

std::vector<Convergent> cf_convergents(const CFExpansion& cf, long long m) {
  if (m < 0) throw DomainError("convergent count must be >= 0");
  std::vector<Convergent> rows;
  rows.reserve(static_cast<std::size_t>(m + 1));
  BigInt pm1 = 1, qm1 = 0;
  BigInt p = cf.quotient(0), q = 1;
  rows.push_back({0, p, q});
  for (long long l = 1; l <= m; ++l) {
    const BigInt& a = cf.quotient(static_cast<std::size_t>(l));
    BigInt np = a * p + pm1;
    BigInt nq = a * q + qm1;
    pm1 = std::move(p);
    qm1 = std::move(q);
    p = std::move(np);
    q = std::move(nq);
    rows.push_back({l, p, q});
  }
  return rows;
}

QuotientBound cf_bounded_quotients(const CFExpansion& cf) {
  QuotientBound out;
  out.c = 0;
  auto bump = [&](const BigInt& a) {
    if (a > out.c) out.c = a;
  };
  for (const auto& a : cf.preperiod) bump(mp::abs(a));
  for (const auto& a : cf.period) bump(a);
  out.bounded = !cf.period.empty();
  return out;
}

GlSums gl_condition(const CFExpansion& cf, long long m) {
  if (m < 0) throw DomainError("gl_condition needs m >= 0");
  const auto conv = cf_convergents(cf, m);
  GlSums out;
  out.sums.reserve(static_cast<std::size_t>(m + 1));
  BigFloat total = 0;
  BigInt prefix = 0;
  const BigFloat tol(kGlTolerance);
  for (long long l = 0; l <= m; ++l) {
    const BigInt& next = cf.quotient(static_cast<std::size_t>(l + 1));
    prefix += next;
    total += BigFloat(next * prefix) / mp::sqrt(BigFloat(conv[static_cast<std::size_t>(l)].q));
    out.sums.push_back(total);
    if (out.stabilized_at < 0 && l >= kGlWindow &&
        total - out.sums[static_cast<std::size_t>(l - kGlWindow)] < tol) {
      out.stabilized_at = l;
    }
  }
  out.converged = out.stabilized_at >= 0;
  return out;
}

namespace {

BigFloat tau_big() { return (BigFloat(1) + sqrt_bigfloat(5)) / 2; }

}  // namespace

BigFloat gl_majorant(const BigInt& c) {
  const BigFloat r = 1 / mp::sqrt(tau_big());
  const BigFloat cc(c);
  return cc * cc / ((1 - r) * (1 - r));
}

BigFloat gl_majorant_shifted(const BigInt& c) { return mp::sqrt(tau_big()) * gl_majorant(c); }

}  // namespace qcps
