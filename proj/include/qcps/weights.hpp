// Copyright 2026 The qcps Authors
// SPDX-License-Identifier: Apache-2.0

// Weight functions on the internal line and the planar regions built from
// them.
//
// Regions live in the unit square and are described through chords along
// the direct direction (1, alpha). A point p has offset w = p2 - alpha p1;
// the chord of P at offset w is the set of p1 with (p1, w + alpha p1) in P,
// and its length is the time a flow of slope alpha spends in P along that
// line.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qcps/exactnum.hpp"
#include "qcps/scheme.hpp"

namespace qcps {

enum class WeightKind { indicator, piecewise_linear, dome };

struct Breakpoint {
  QuadNum x;
  QuadNum value;
};

class WeightFn {
 public:
  static WeightFn indicator(Interval support);
  /// Linear interpolation between breakpoints, zero outside [x_0, x_k].
  static WeightFn piecewise_linear(std::vector<Breakpoint> points);
  /// amplitude (1 - v^2)^2, v the affine map of [lo, hi] onto [-1, 1].
  static WeightFn dome(const QuadNum& lo, const QuadNum& hi, const QuadNum& amplitude);

  WeightKind kind() const { return kind_; }
  const Interval& support() const { return support_; }
  const std::vector<Breakpoint>& breakpoints() const { return points_; }
  const QuadNum& amplitude() const { return amp_; }
  /// h vanishes at both ends of its support and is continuous.
  bool continuous_supported() const;

  QuadNum value(const QuadNum& z) const;
  BigFloat value(const BigFloat& z) const;
  BigFloat derivative(const BigFloat& z, int order) const;
  QuadNum integral() const;
  QuadNum max_value() const;
  /// Certified sup |h''| on the support (dome only; 0 for linear pieces).
  QuadNum sup_second_derivative() const;
  /// Certified [min, max] of h'' over [z0, z1] (dome only; h'' = 0 off the support).
  std::pair<QuadNum, QuadNum> second_derivative_range(const QuadNum& z0, const QuadNum& z1) const;

  /// z -> h(z / k).
  WeightFn rescaled_argument(const QuadNum& k) const;
  /// z -> c h(z).
  WeightFn scaled(const QuadNum& c) const;

  std::string describe() const;

 private:
  WeightKind kind_ = WeightKind::indicator;
  Interval support_;
  std::vector<Breakpoint> points_;
  QuadNum amp_;
};

/// Triangle with apex (peak, value) over [support.lo, support.hi].
WeightFn make_hat(const Interval& support, const QuadNum& peak, const QuadNum& value);
WeightFn make_c2_dome(const Interval& support, const QuadNum& amplitude);

/// Weighted density integral(h) / |det B|.
QuadNum density(const Scheme& s, const WeightFn& h);

// ----------------------------------------------------------------------
// Regions.

struct Polygon {
  /// Counter-clockwise, simple.
  std::vector<Vec2> v;
};

struct Chord {
  /// p1 range.
  BigFloat lo;
  BigFloat hi;
};

/// Region bounded by the graphs p1 = lower(w), p1 = upper(w) over an
/// offset range; lower == upper at the ends.
struct GraphPair {
  BigFloat w_lo;
  BigFloat w_hi;
  std::function<BigFloat(const BigFloat&)> lower;
  std::function<BigFloat(const BigFloat&)> upper;
  /// Certified upper bound of (upper - lower)'' on [w0, w1] (inside the range).
  std::function<BigFloat(const BigFloat&, const BigFloat&)> width_second_upper;
  BigFloat area;
};

enum class RegionKind { polygon, graph_pair };

struct Region {
  RegionKind kind = RegionKind::polygon;
  std::vector<Polygon> polygons;
  GraphPair graph;
  /// Whether the chord at the extreme offsets is included (exact window
  /// membership transported to the region boundary).
  bool include_top = true;
  bool include_bottom = true;
  /// Rescale factor c' applied to the weight.
  QuadNum rescale{1};
  std::string label;

  QuadNum area_exact() const;
  BigFloat area() const;
  /// Sum of chord pieces at offset w (exact path, polygons only).
  std::vector<std::pair<QuadNum, QuadNum>> chords(const QuadNum& alpha, const QuadNum& w) const;
  std::vector<Chord> chords(const BigFloat& alpha, const BigFloat& w) const;
  bool inside_unit_square() const;
};

Region polygon_region(std::vector<Polygon> polys, std::string label = "polygon");

/// Geometry of the bridge between a weight on W and a region.
struct RegionPlacement {
  QuadNum alpha;
  /// Offsets w and internal coordinates u correspond by w = K - u.
  QuadNum K;
  QuadNum rescale;
};

/// Largest c' = 2^-k <= 1 with the region of c' h inside [0,1]^2. Throws
/// DomainError when |W| >= alpha (the caller has to split first).
RegionPlacement place_weight(const WeightFn& h, const QuadNum& alpha);

/// Region whose chord at offset w = K - u has length c' h(u), centred on
/// the line p2 = 1/2.
Region region_from_weight(const WeightFn& h, const QuadNum& alpha,
                          std::optional<QuadNum> rescale = std::nullopt);

/// Chord length of a polygon region as an exact piecewise-linear function
/// of the offset w. Throws DomainError when an edge has slope alpha.
WeightFn width_function(const Region& p, const QuadNum& alpha);
BigFloat width_at(const Region& p, const BigFloat& alpha, const BigFloat& w);

// ----------------------------------------------------------------------
// Curvature.

BigFloat curvature_graph(const BigFloat& fp, const BigFloat& fpp);
BigFloat curvature_parametric(const BigFloat& dx, const BigFloat& dy, const BigFloat& ddx,
                              const BigFloat& ddy);
/// For a unit-speed parametrization: |r''(s)|.
BigFloat curvature_unit_speed(const BigFloat& ddx, const BigFloat& ddy);
BigFloat curvature_ellipse(const BigFloat& a, const BigFloat& b, const BigFloat& theta);

struct HypothesisReport {
  enum class Status { polygon_ok, convex_ok, fail };
  Status status = Status::fail;
  std::string reason;
  std::string status_name() const;
};

/// Polygons: no edge of slope alpha. Graph pairs: the chord length is
/// strictly concave (certified bounds on a dyadic grid), which for this
/// construction is equivalent to positive curvature of the boundary.
HypothesisReport check_brs_hypotheses(const Region& p, const QuadNum& alpha);

/// h = c1 f - (c1 f - h) with f the chord length of a disc of radius
/// R = |W|/2 + |W|/10 centred on W. Both parts are concave on their support.
struct DomeDecomposition {
  QuadNum c1;
  QuadNum radius;
  QuadNum center;
  /// Certified upper bound of (c1 f - h)'' (negative when the split works).
  BigFloat second_bound;
  /// Largest (c1 f - h)'' seen on a uniform grid.
  BigFloat grid_max;
  int grid_points = 0;
  bool ok = false;
};

DomeDecomposition decompose_dome(const WeightFn& h, int grid_points = 10000);

/// Regions for c1 f and c1 f - h (same placement K and rescale, which is
/// chosen so both fit). The comb of h is the difference of the two combs.
struct DomeRegions {
  Region disc;
  Region rest;
  RegionPlacement placement;
};

DomeRegions dome_regions(const WeightFn& h, const DomeDecomposition& dec, const QuadNum& alpha);

}  // namespace qcps
