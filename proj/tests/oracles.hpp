// Copyright 2026 The qcps Authors
// SPDX-License-Identifier: Apache-2.0

// Reference computations for the tests. None of these call into the code
// path they are compared against.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qcps/exactnum.hpp"
#include "qcps/scheme.hpp"

namespace qcps::testing {

/// floor(sqrt(n)) by Newton iteration on integers.
inline BigInt newton_isqrt(const BigInt& n) {
  if (n < 2) return n;
  BigInt x = n;
  BigInt y = (x + 1) / 2;
  while (y < x) {
    x = y;
    y = (x + n / x) / 2;
  }
  return x;
}

inline bool in_window(const Interval& w, const QuadNum& u) {
  switch (w.convention) {
    case Convention::half_open_right:
      return w.lo <= u && u < w.hi;
    case Convention::closed:
      return w.lo <= u && u <= w.hi;
    case Convention::half_open_left:
      return w.lo < u && u <= w.hi;
  }
  return false;
}

struct BrutePoint {
  QuadNum x;
  QuadNum u;
  long long m;
  long long n;
};

/// Every (m, n) in the box |m|, |n| <= radius, projected by Cramer's rule
/// x = det[y, H] / det[(1, alpha), H]. Sets `edge_hit` when an accepted
/// point lies within 2 of the box boundary (radius too small).
inline std::vector<BrutePoint> brute_points(const Scheme& s, const QuadNum& lo, const QuadNum& hi,
                                            long long radius, bool* edge_hit = nullptr) {
  const Vec2 g{QuadNum(1), s.slope};
  const Vec2& h = s.internal_dir;
  const QuadNum den = g.x * h.y - g.y * h.x;
  std::vector<BrutePoint> out;
  if (edge_hit != nullptr) *edge_hit = false;
  for (long long m = -radius; m <= radius; ++m) {
    for (long long n = -radius; n <= radius; ++n) {
      const QuadNum y1 = s.basis.a00 * QuadNum(m) + s.basis.a01 * QuadNum(n) + s.translate.x;
      const QuadNum y2 = s.basis.a10 * QuadNum(m) + s.basis.a11 * QuadNum(n) + s.translate.y;
      const QuadNum x = (y1 * h.y - y2 * h.x) / den;
      if (x < lo || hi < x) continue;
      const QuadNum u = y2 - s.slope * y1;
      if (!in_window(s.window, u)) continue;
      out.push_back({x, u, m, n});
      if (edge_hit != nullptr && (std::llabs(m) > radius - 2 || std::llabs(n) > radius - 2)) {
        *edge_hit = true;
      }
    }
  }
  return out;
}

/// Even-odd point-in-polygon test in doubles.
inline bool inside_polygon(const std::vector<std::pair<double, double>>& v, double x, double y) {
  bool in = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    const auto [xi, yi] = v[i];
    const auto [xj, yj] = v[j];
    if ((yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi) in = !in;
  }
  return in;
}

/// Midpoint Riemann sum of time spent in a polygon by x + s(1, alpha) mod 1.
inline double riemann_time(const std::vector<std::pair<double, double>>& poly, double alpha,
                           double x1, double x2, double t, double step) {
  const auto steps = static_cast<std::int64_t>(std::llround(t / step));
  double acc = 0;
  for (std::int64_t k = 0; k < steps; ++k) {
    const double s = (static_cast<double>(k) + 0.5) * step;
    double px = x1 + s;
    double py = x2 + alpha * s;
    px -= std::floor(px);
    py -= std::floor(py);
    if (inside_polygon(poly, px, py)) acc += step;
  }
  return acc;
}

/// Small random element a + b sqrt(d) with a, b = p/q.
inline QuadNum random_quad(std::mt19937_64& rng, long long d, int range = 20, int den = 9) {
  std::uniform_int_distribution<int> num(-range, range);
  std::uniform_int_distribution<int> dd(1, den);
  const Rational a(num(rng), dd(rng));
  const Rational b(num(rng), dd(rng));
  return QuadNum(a, b, d);
}

}  // namespace qcps::testing
