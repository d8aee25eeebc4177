// Copyright 2026 The qcps Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcps/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace qcps {

std::string to_string(Convention c) {
  switch (c) {
    case Convention::half_open_right: return "half_open_right";
    case Convention::closed: return "closed";
    case Convention::half_open_left: return "half_open_left";
  }
  return "?";
}

std::string to_string(Axes a) {
  switch (a) {
    case Axes::orthogonal: return "orthogonal";
    case Axes::coordinate: return "coordinate";
    case Axes::explicit_dir: return "explicit";
  }
  return "?";
}

Convention parse_convention(const std::string& s) {
  if (s == "half_open_right") return Convention::half_open_right;
  if (s == "closed") return Convention::closed;
  if (s == "half_open_left") return Convention::half_open_left;
  throw DomainError("unknown window convention '" + s + "'");
}

Axes parse_axes(const std::string& s) {
  if (s == "orthogonal") return Axes::orthogonal;
  if (s == "coordinate") return Axes::coordinate;
  if (s == "explicit") return Axes::explicit_dir;
  throw DomainError("unknown axes '" + s + "'");
}

bool Interval::contains(const QuadNum& v) const {
  const int sl = (v - lo).sign();
  const int sh = (v - hi).sign();
  switch (convention) {
    case Convention::half_open_right: return sl >= 0 && sh < 0;
    case Convention::closed: return sl >= 0 && sh <= 0;
    case Convention::half_open_left: return sl > 0 && sh <= 0;
  }
  return false;
}

Interval Interval::scaled(const QuadNum& k) const {
  if (k.sign() > 0) return {lo * k, hi * k, convention};
  Convention c = convention;
  if (c == Convention::half_open_right) {
    c = Convention::half_open_left;
  } else if (c == Convention::half_open_left) {
    c = Convention::half_open_right;
  }
  return {hi * k, lo * k, c};
}

Mat2 Mat2::identity() { return {QuadNum(1), QuadNum(0), QuadNum(0), QuadNum(1)}; }

Mat2 Mat2::from_columns(const Vec2& c0, const Vec2& c1) { return {c0.x, c1.x, c0.y, c1.y}; }

Mat2 Mat2::inverse() const {
  const QuadNum dt = det();
  if (dt.is_zero()) throw DomainError("singular matrix");
  return {a11 / dt, -a01 / dt, -a10 / dt, a00 / dt};
}

Vec2 Mat2::operator*(const Vec2& v) const { return {a00 * v.x + a01 * v.y, a10 * v.x + a11 * v.y}; }

Mat2 Mat2::operator*(const Mat2& o) const {
  return {a00 * o.a00 + a01 * o.a10, a00 * o.a01 + a01 * o.a11, a10 * o.a00 + a11 * o.a10,
          a10 * o.a01 + a11 * o.a11};
}

QuadNum det2(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

namespace {

long long field_of(std::initializer_list<const QuadNum*> xs) {
  long long d = 0;
  for (const QuadNum* x : xs) {
    if (x->d() == 0) continue;
    if (d != 0 && x->d() != d) {
      throw FieldMismatch("scheme entries come from different quadratic fields");
    }
    d = x->d();
  }
  return d;
}

// True when v is not a real multiple of a rational vector.
bool irrational_direction(const Vec2& v) {
  if (v.x.is_zero() || v.y.is_zero()) return false;
  return !(v.y / v.x).is_rational();
}

}  // namespace

Vec2 Scheme::lattice_point(long long m, long long n) const {
  return {basis.a00 * QuadNum(m) + basis.a01 * QuadNum(n) + translate.x,
          basis.a10 * QuadNum(m) + basis.a11 * QuadNum(n) + translate.y};
}

QuadNum Scheme::internal(const Vec2& y) const { return y.y - slope * y.x; }

QuadNum Scheme::direct(const Vec2& y) const { return y.x + c_ * internal(y); }

QuadNum Scheme::density() const { return window.length() / basis.det().abs(); }

Scheme build_scheme(Mat2 basis, Vec2 translate, QuadNum slope, Interval window, Axes axes,
                    std::optional<Vec2> internal_dir) {
  Scheme s;
  switch (axes) {
    case Axes::orthogonal: s.internal_dir = {-slope, QuadNum(1)}; break;
    case Axes::coordinate: s.internal_dir = {QuadNum(0), QuadNum(1)}; break;
    case Axes::explicit_dir:
      if (!internal_dir) throw DomainError("explicit axes need an internal direction");
      s.internal_dir = *internal_dir;
      break;
  }
  s.d = field_of({&basis.a00, &basis.a01, &basis.a10, &basis.a11, &translate.x, &translate.y,
                  &slope, &window.lo, &window.hi, &s.internal_dir.x, &s.internal_dir.y});
  if (basis.det().is_zero()) throw DomainError("lattice basis is singular");
  if ((window.hi - window.lo).sign() < 0 ||
      (window.hi == window.lo && window.convention != Convention::closed)) {
    throw DomainError("window is empty");
  }
  const Vec2 g{QuadNum(1), slope};
  const QuadNum gh = det2(g, s.internal_dir);
  if (gh.is_zero()) throw DomainError("internal direction is parallel to the direct line");
  const Mat2 inv = basis.inverse();
  if (!irrational_direction(inv * g)) {
    throw DomainError("direct line contains lattice directions (slope " + slope.str() +
                      " is rational relative to the lattice)");
  }
  if (!irrational_direction(inv * s.internal_dir)) {
    throw DomainError("internal direction is rational relative to the lattice");
  }
  s.basis = std::move(basis);
  s.translate = std::move(translate);
  s.slope = std::move(slope);
  s.axes = axes;
  s.window = std::move(window);
  s.c_ = s.internal_dir.x / (-gh);
  return s;
}

StarResult star_map(const Scheme& s, long long m, long long n) {
  const Vec2 y = s.lattice_point(m, n);
  StarResult r;
  r.point.internal = s.internal(y);
  r.point.direct = y.x + s.direct_shift() * r.point.internal;
  r.point.m = m;
  r.point.n = n;
  r.accepted = s.window.contains(r.point.internal);
  return r;
}

bool direct_less(const QuadNum& a, const QuadNum& b) {
  const double da = a.approx();
  const double db = b.approx();
  const double margin = 1e-9 * (1.0 + std::abs(da)) + a.approx_error() + b.approx_error();
  if (std::abs(da - db) > margin) return da < db;
  return a < b;
}

namespace {

struct Affine2 {
  // x = xm m + xn n + x0, u = um m + un n + u0.
  QuadNum xm, xn, x0, um, un, u0;
};

Affine2 coordinates(const Scheme& s) {
  Affine2 f;
  const Vec2 c0 = s.basis.col(0);
  const Vec2 c1 = s.basis.col(1);
  f.um = s.internal(c0);
  f.un = s.internal(c1);
  f.u0 = s.internal(s.translate);
  f.xm = c0.x + s.direct_shift() * f.um;
  f.xn = c1.x + s.direct_shift() * f.un;
  f.x0 = s.translate.x + s.direct_shift() * f.u0;
  return f;
}

// Bounds of k*v + c for v in [lo, hi] pulled back to integers: the set of
// integers m with lo <= k m + c <= hi.
std::pair<BigInt, BigInt> integer_range(const QuadNum& k, const QuadNum& lo, const QuadNum& hi) {
  QuadNum a = lo / k;
  QuadNum b = hi / k;
  if (k.sign() < 0) std::swap(a, b);
  return {a.ceil(), b.floor()};
}

std::vector<CpsPoint> scan_rows(const Scheme& s, const Affine2& f, const QuadNum& lo,
                                const QuadNum& hi, long long n0, long long n1) {
  std::vector<CpsPoint> out;
  const QuadNum& a = s.window.lo;
  const QuadNum& b = s.window.hi;
  for (long long n = n0; n <= n1; ++n) {
    const QuadNum qn(n);
    const QuadNum xs = f.xn * qn + f.x0;
    const QuadNum us = f.un * qn + f.u0;
    auto [mx0, mx1] = integer_range(f.xm, lo - xs, hi - xs);
    auto [mu0, mu1] = integer_range(f.um, a - us, b - us);
    const BigInt m0 = std::max(mx0, mu0);
    const BigInt m1 = std::min(mx1, mu1);
    for (BigInt m = m0; m <= m1; ++m) {
      const QuadNum qm{Rational(m)};
      CpsPoint p;
      p.internal = f.um * qm + us;
      if (!s.window.contains(p.internal)) continue;
      p.direct = f.xm * qm + xs;
      p.m = m.convert_to<long long>();
      p.n = n;
      out.push_back(std::move(p));
    }
  }
  return out;
}

}  // namespace

std::vector<CpsPoint> enumerate_points(const Scheme& s, const QuadNum& lo, const QuadNum& hi,
                                       int jobs) {
  if (hi < lo) throw DomainError("enumeration range is empty");
  const Affine2 f = coordinates(s);
  // n = (xm (u - u0) - um (x - x0)) / (xm un - um xn) over the box.
  const QuadNum den = f.xm * f.un - f.um * f.xn;
  QuadNum nmin, nmax;
  bool first = true;
  for (const QuadNum* x : {&lo, &hi}) {
    for (const QuadNum* u : {&s.window.lo, &s.window.hi}) {
      const QuadNum v = (f.xm * (*u - f.u0) - f.um * (*x - f.x0)) / den;
      if (first || v < nmin) nmin = v;
      if (first || v > nmax) nmax = v;
      first = false;
    }
  }
  const long long n0 = nmin.floor().convert_to<long long>();
  const long long n1 = nmax.ceil().convert_to<long long>();
  std::vector<CpsPoint> pts;
  const long long rows = n1 - n0 + 1;
  if (jobs <= 1 || rows < 256) {
    pts = scan_rows(s, f, lo, hi, n0, n1);
  } else {
    std::vector<std::future<std::vector<CpsPoint>>> parts;
    const long long step = (rows + jobs - 1) / jobs;
    for (long long start = n0; start <= n1; start += step) {
      const long long stop = std::min(n1, start + step - 1);
      parts.push_back(std::async(std::launch::async, [&, start, stop] {
        return scan_rows(s, f, lo, hi, start, stop);
      }));
    }
    for (auto& part : parts) {
      auto chunk = part.get();
      pts.insert(pts.end(), std::make_move_iterator(chunk.begin()),
                 std::make_move_iterator(chunk.end()));
    }
  }
  std::sort(pts.begin(), pts.end(),
            [](const CpsPoint& p, const CpsPoint& q) { return direct_less(p.direct, q.direct); });
  return pts;
}

std::vector<Scheme> split_scheme(const Scheme& s, long long n) {
  if (n < 1) throw DomainError("split factor must be >= 1");
  if (!(s.basis == Mat2::identity())) throw DomainError("split_scheme needs the Z^2 lattice");
  std::vector<Scheme> out;
  if (n == 1) {
    out.push_back(s);
    return out;
  }
  const QuadNum qn(n);
  const Mat2 nb{qn, QuadNum(0), QuadNum(0), qn};
  for (long long k = 0; k < n; ++k) {
    for (long long l = 0; l < n; ++l) {
      Vec2 z{s.translate.x + QuadNum(k), s.translate.y + QuadNum(l)};
      std::optional<Vec2> h;
      if (s.axes == Axes::explicit_dir) h = s.internal_dir;
      out.push_back(build_scheme(nb, z, s.slope, s.window, s.axes, h));
    }
  }
  return out;
}

QuadNormalized quad_normalize(const Scheme& s) {
  QuadNormalized r;
  Mat2 M = s.basis.inverse();
  Vec2 g = M * Vec2{QuadNum(1), s.slope};
  // g.x != 0 since the direct line has irrational lattice direction.
  if ((g.y / g.x).sign() < 0) {
    M = Mat2{-M.a00, -M.a01, M.a10, M.a11};
    g = M * Vec2{QuadNum(1), s.slope};
    r.reflected = true;
  }
  r.M = M;
  r.slope = g.y / g.x;
  if (r.slope.is_rational()) throw DomainError("normalized slope is rational");
  r.kappa_x = g.x;
  r.kappa_u = M.det() / g.x;
  Vec2 h = M * s.internal_dir;
  Axes axes = Axes::explicit_dir;
  if (det2(h, Vec2{-r.slope, QuadNum(1)}).is_zero()) axes = Axes::orthogonal;
  std::optional<Vec2> hdir;
  if (axes == Axes::explicit_dir) hdir = h;
  r.scheme = build_scheme(Mat2::identity(), M * s.translate, r.slope, s.window.scaled(r.kappa_u),
                          axes, hdir);
  return r;
}

QuadNum golden_ratio() { return QuadNum(Rational(1, 2), Rational(1, 2), 5); }

Scheme fibonacci_preset(FibonacciKind kind) {
  const QuadNum tau = golden_ratio();
  const QuadNum inv = QuadNum(1) / tau;
  const Mat2 basis = Mat2::from_columns({QuadNum(1), QuadNum(1)}, {tau, -inv});
  Interval w{-inv, QuadNum(1), Convention::half_open_right};
  if (kind == FibonacciKind::half) w.hi = -inv + tau / QuadNum(2);
  return build_scheme(basis, {QuadNum(0), QuadNum(0)}, QuadNum(0), w, Axes::coordinate);
}

}  // namespace qcps
