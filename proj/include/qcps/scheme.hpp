// Copyright 2026 The qcps Authors
// SPDX-License-Identifier: Apache-2.0

// 1x1 cut-and-project schemes over a real quadratic field.
//
// A lattice point y = B (m, n) + z is split along the direct line
// G = (1, alpha) R and the internal direction H:
//
//   y = x (1, alpha) + s H,   u = det[(1, alpha), y] = y2 - alpha y1.
//
// x is the direct coordinate and u the internal one. With this scaling the
// map y -> (x, u) has unit Jacobian for every H, so the point density of
// the set is |W| / |det B|.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcps/exactnum.hpp"

namespace qcps {

enum class Convention { half_open_right, closed, half_open_left };
enum class Axes { orthogonal, coordinate, explicit_dir };

std::string to_string(Convention c);
std::string to_string(Axes a);
Convention parse_convention(const std::string& s);
Axes parse_axes(const std::string& s);

struct Interval {
  QuadNum lo;
  QuadNum hi;
  Convention convention = Convention::half_open_right;

  bool contains(const QuadNum& v) const;
  QuadNum length() const { return hi - lo; }
  /// Image under v -> k v; reverses endpoints and mirrors the convention for k < 0.
  Interval scaled(const QuadNum& k) const;
};

struct Vec2 {
  QuadNum x;
  QuadNum y;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Columns c0 = (a00, a10), c1 = (a01, a11).
struct Mat2 {
  QuadNum a00, a01, a10, a11;

  static Mat2 identity();
  static Mat2 from_columns(const Vec2& c0, const Vec2& c1);
  Vec2 col(int j) const { return j == 0 ? Vec2{a00, a10} : Vec2{a01, a11}; }
  QuadNum det() const { return a00 * a11 - a01 * a10; }
  Mat2 inverse() const;
  Vec2 operator*(const Vec2& v) const;
  Mat2 operator*(const Mat2& o) const;
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

QuadNum det2(const Vec2& a, const Vec2& b);

struct Scheme {
  long long d = 0;
  Mat2 basis;
  Vec2 translate;
  QuadNum slope;
  Axes axes = Axes::coordinate;
  /// H; derived from `axes` unless it is explicit_dir.
  Vec2 internal_dir;
  Interval window;

  Vec2 lattice_point(long long m, long long n) const;
  QuadNum direct(const Vec2& y) const;
  QuadNum internal(const Vec2& y) const;
  /// x = y1 + c u.
  const QuadNum& direct_shift() const { return c_; }
  QuadNum density() const;

 private:
  friend Scheme build_scheme(Mat2, Vec2, QuadNum, Interval, Axes, std::optional<Vec2>);
  QuadNum c_;
};

/// Validates and completes a scheme. Throws DomainError when the basis is
/// singular, the window is empty, or G or H contains a lattice direction.
Scheme build_scheme(Mat2 basis, Vec2 translate, QuadNum slope, Interval window,
                    Axes axes = Axes::coordinate, std::optional<Vec2> internal_dir = std::nullopt);

struct CpsPoint {
  QuadNum direct;
  QuadNum internal;
  long long m = 0;
  long long n = 0;
};

/// Projections of the lattice point (m, n). `accepted` is window membership.
struct StarResult {
  CpsPoint point;
  bool accepted = false;
};

StarResult star_map(const Scheme& s, long long m, long long n);

/// Every point with direct coordinate in the closed range [lo, hi], sorted.
std::vector<CpsPoint> enumerate_points(const Scheme& s, const QuadNum& lo, const QuadNum& hi,
                                       int jobs = 1);

/// Exact total order on direct coordinates with a cheap double pre-check.
bool direct_less(const QuadNum& a, const QuadNum& b);

std::vector<Scheme> split_scheme(const Scheme& s, long long n);

struct QuadNormalized {
  Scheme scheme;
  /// M = B^{-1}, possibly followed by (m, n) -> (-m, n).
  Mat2 M;
  QuadNum slope;
  bool reflected = false;
  /// u' = kappa_u u and x' = kappa_x x for corresponding points.
  QuadNum kappa_u;
  QuadNum kappa_x;
};

/// Carries the scheme to Z^2 by M = B^{-1}. The normalized slope is made
/// positive with the reflection (m, n) -> (-m, n), which preserves Z^2.
QuadNormalized quad_normalize(const Scheme& s);

enum class FibonacciKind { full, half };

/// Lattice <(1,1), (tau, -1/tau)>, G and H the coordinate axes.
/// full: W = [-1/tau, 1); half: W = [-1/tau, -1/tau + tau/2).
Scheme fibonacci_preset(FibonacciKind kind);

QuadNum golden_ratio();

}  // namespace qcps
