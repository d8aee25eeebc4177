// Copyright 2026 The qcps Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcps/weights.hpp"

#include <algorithm>
#include <boost/math/constants/constants.hpp>
#include <sstream>

namespace qcps {

namespace {

const QuadNum& qmax(const QuadNum& a, const QuadNum& b) { return a < b ? b : a; }
const QuadNum& qmin(const QuadNum& a, const QuadNum& b) { return b < a ? b : a; }

}  // namespace

WeightFn WeightFn::indicator(Interval support) {
  if (!(support.lo < support.hi)) throw DomainError("indicator support is empty");
  WeightFn h;
  h.kind_ = WeightKind::indicator;
  h.support_ = std::move(support);
  return h;
}

WeightFn WeightFn::piecewise_linear(std::vector<Breakpoint> points) {
  if (points.size() < 2) throw DomainError("piecewise linear weight needs two breakpoints");
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i - 1].x < points[i].x)) {
      throw DomainError("breakpoints must be strictly increasing");
    }
  }
  for (const auto& p : points) {
    if (p.value.sign() < 0) throw DomainError("weights must be nonnegative");
  }
  WeightFn h;
  h.kind_ = WeightKind::piecewise_linear;
  h.support_ = {points.front().x, points.back().x, Convention::closed};
  h.points_ = std::move(points);
  return h;
}

WeightFn WeightFn::dome(const QuadNum& lo, const QuadNum& hi, const QuadNum& amplitude) {
  if (!(lo < hi)) throw DomainError("dome support is degenerate");
  if (amplitude.sign() <= 0) throw DomainError("dome amplitude must be positive");
  WeightFn h;
  h.kind_ = WeightKind::dome;
  h.support_ = {lo, hi, Convention::closed};
  h.amp_ = amplitude;
  return h;
}

bool WeightFn::continuous_supported() const {
  switch (kind_) {
    case WeightKind::indicator: return false;
    case WeightKind::piecewise_linear:
      return points_.front().value.is_zero() && points_.back().value.is_zero();
    case WeightKind::dome: return true;
  }
  return false;
}

QuadNum WeightFn::value(const QuadNum& z) const {
  switch (kind_) {
    case WeightKind::indicator: return support_.contains(z) ? QuadNum(1) : QuadNum(0);
    case WeightKind::piecewise_linear: {
      if (z < points_.front().x || z > points_.back().x) return QuadNum(0);
      auto it = std::upper_bound(points_.begin(), points_.end(), z,
                                 [](const QuadNum& v, const Breakpoint& b) { return v < b.x; });
      if (it == points_.end()) return points_.back().value;
      const Breakpoint& r = *it;
      const Breakpoint& l = *(it - 1);
      return l.value + (r.value - l.value) * (z - l.x) / (r.x - l.x);
    }
    case WeightKind::dome: {
      if (z < support_.lo || z > support_.hi) return QuadNum(0);
      const QuadNum v = (QuadNum(2) * z - support_.lo - support_.hi) / (support_.hi - support_.lo);
      const QuadNum w = QuadNum(1) - v * v;
      return amp_ * w * w;
    }
  }
  return QuadNum(0);
}

BigFloat WeightFn::value(const BigFloat& z) const { return derivative(z, 0); }

BigFloat WeightFn::derivative(const BigFloat& z, int order) const {
  const BigFloat lo = support_.lo.to_bigfloat();
  const BigFloat hi = support_.hi.to_bigfloat();
  switch (kind_) {
    case WeightKind::indicator:
      if (order > 0) return BigFloat(0);
      return (z >= lo && z <= hi) ? BigFloat(1) : BigFloat(0);
    case WeightKind::piecewise_linear: {
      if (z < lo || z > hi) return BigFloat(0);
      for (std::size_t i = 1; i < points_.size(); ++i) {
        const BigFloat xr = points_[i].x.to_bigfloat();
        if (z <= xr || i + 1 == points_.size()) {
          const BigFloat xl = points_[i - 1].x.to_bigfloat();
          const BigFloat vl = points_[i - 1].value.to_bigfloat();
          const BigFloat vr = points_[i].value.to_bigfloat();
          const BigFloat slope = (vr - vl) / (xr - xl);
          if (order == 1) return slope;
          if (order > 1) return BigFloat(0);
          return vl + slope * (z - xl);
        }
      }
      return BigFloat(0);
    }
    case WeightKind::dome: {
      if (z < lo || z > hi) return BigFloat(0);
      const BigFloat k = BigFloat(2) / (hi - lo);
      const BigFloat v = (2 * z - lo - hi) / (hi - lo);
      const BigFloat a = amp_.to_bigfloat();
      const BigFloat w = 1 - v * v;
      if (order == 0) return a * w * w;
      if (order == 1) return -4 * a * v * w * k;
      if (order == 2) return 4 * a * (3 * v * v - 1) * k * k;
      throw DomainError("dome derivatives are provided up to order 2");
    }
  }
  return BigFloat(0);
}

QuadNum WeightFn::integral() const {
  switch (kind_) {
    case WeightKind::indicator: return support_.length();
    case WeightKind::piecewise_linear: {
      QuadNum s;
      for (std::size_t i = 1; i < points_.size(); ++i) {
        s += (points_[i].x - points_[i - 1].x) * (points_[i].value + points_[i - 1].value) /
             QuadNum(2);
      }
      return s;
    }
    case WeightKind::dome:
      // (b - a)/2 * integral_{-1}^{1} (1 - v^2)^2 dv = (b - a)/2 * 16/15.
      return amp_ * support_.length() * QuadNum::rational(8, 15);
  }
  return QuadNum(0);
}

QuadNum WeightFn::max_value() const {
  switch (kind_) {
    case WeightKind::indicator: return QuadNum(1);
    case WeightKind::piecewise_linear: {
      QuadNum m;
      for (const auto& p : points_) m = qmax(m, p.value);
      return m;
    }
    case WeightKind::dome: return amp_;
  }
  return QuadNum(0);
}

QuadNum WeightFn::sup_second_derivative() const {
  if (kind_ != WeightKind::dome) return QuadNum(0);
  // |h''| = 4 A k^2 |3 v^2 - 1| <= 8 A k^2, k = 2 / (b - a).
  const QuadNum k = QuadNum(2) / support_.length();
  return QuadNum(8) * amp_ * k * k;
}

std::pair<QuadNum, QuadNum> WeightFn::second_derivative_range(const QuadNum& z0,
                                                              const QuadNum& z1) const {
  if (kind_ != WeightKind::dome) return {QuadNum(0), QuadNum(0)};
  const QuadNum lo = qmax(z0, support_.lo);
  const QuadNum hi = qmin(z1, support_.hi);
  if (hi < lo) return {QuadNum(0), QuadNum(0)};
  const QuadNum L = support_.length();
  const QuadNum k = QuadNum(2) / L;
  auto v_of = [&](const QuadNum& z) { return (QuadNum(2) * z - support_.lo - support_.hi) / L; };
  const QuadNum v0 = v_of(lo);
  const QuadNum v1 = v_of(hi);
  const QuadNum vmax2 = qmax(v0 * v0, v1 * v1);
  QuadNum vmin2 = qmin(v0 * v0, v1 * v1);
  if (v0.sign() <= 0 && v1.sign() >= 0) vmin2 = QuadNum(0);
  const QuadNum c = QuadNum(4) * amp_ * k * k;
  QuadNum rlo = c * (QuadNum(3) * vmin2 - QuadNum(1));
  QuadNum rhi = c * (QuadNum(3) * vmax2 - QuadNum(1));
  // Off the support h'' = 0.
  if (z0 < support_.lo || z1 > support_.hi) {
    rlo = qmin(rlo, QuadNum(0));
    rhi = qmax(rhi, QuadNum(0));
  }
  return {rlo, rhi};
}

WeightFn WeightFn::rescaled_argument(const QuadNum& k) const {
  if (k.is_zero()) throw DomainError("zero argument scale");
  WeightFn h = *this;
  h.support_ = support_.scaled(k);
  if (kind_ == WeightKind::piecewise_linear) {
    for (auto& p : h.points_) p.x *= k;
    if (k.sign() < 0) std::reverse(h.points_.begin(), h.points_.end());
  }
  return h;
}

WeightFn WeightFn::scaled(const QuadNum& c) const {
  if (c.sign() <= 0) throw DomainError("weight scale must be positive");
  if (kind_ == WeightKind::indicator) {
    if (c == QuadNum(1)) return *this;
    // c * indicator as a piecewise-linear weight would lose the jump, so it
    // is not representable.
    throw DomainError("indicator weights cannot be scaled");
  }
  WeightFn h = *this;
  if (kind_ == WeightKind::piecewise_linear) {
    for (auto& p : h.points_) p.value *= c;
  } else {
    h.amp_ *= c;
  }
  return h;
}

std::string WeightFn::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case WeightKind::indicator:
      os << "indicator" << (support_.convention == Convention::half_open_left ? "(" : "[")
         << support_.lo << ", " << support_.hi
         << (support_.convention == Convention::half_open_right ? ")" : "]");
      break;
    case WeightKind::piecewise_linear:
      os << "piecewise_linear";
      for (const auto& p : points_) os << " (" << p.x << ", " << p.value << ")";
      break;
    case WeightKind::dome:
      os << "dome[" << support_.lo << ", " << support_.hi << "] amplitude " << amp_;
      break;
  }
  return os.str();
}

WeightFn make_hat(const Interval& support, const QuadNum& peak, const QuadNum& value) {
  if (!(support.lo < peak && peak < support.hi)) {
    throw DomainError("hat peak must lie strictly inside the support");
  }
  if (value.sign() <= 0) throw DomainError("hat peak value must be positive");
  return WeightFn::piecewise_linear(
      {{support.lo, QuadNum(0)}, {peak, value}, {support.hi, QuadNum(0)}});
}

WeightFn make_c2_dome(const Interval& support, const QuadNum& amplitude) {
  return WeightFn::dome(support.lo, support.hi, amplitude);
}

QuadNum density(const Scheme& s, const WeightFn& h) {
  return h.integral() / s.basis.det().abs();
}

// ----------------------------------------------------------------------
// Regions.

namespace {

template <class S>
S as(const QuadNum& x);
template <>
QuadNum as<QuadNum>(const QuadNum& x) {
  return x;
}
template <>
BigFloat as<BigFloat>(const QuadNum& x) {
  return x.to_bigfloat();
}

template <class S>
std::vector<std::pair<S, S>> polygon_chords(const Region& r, const S& alpha, const S& w) {
  std::vector<std::pair<S, S>> out;
  bool first = true;
  S top, bottom;
  for (const auto& poly : r.polygons) {
    for (const auto& p : poly.v) {
      const S wp = as<S>(p.y) - alpha * as<S>(p.x);
      if (first || wp > top) top = wp;
      if (first || wp < bottom) bottom = wp;
      first = false;
    }
  }
  if (first || w > top || w < bottom) return out;
  if (w == bottom && !r.include_bottom) return out;
  if (w == top && !r.include_top) return out;
  // Crossings are taken as limits from above except on the top line.
  const bool from_below = w == top;
  for (const auto& poly : r.polygons) {
    std::vector<S> xs;
    const std::size_t n = poly.v.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& p = poly.v[i];
      const Vec2& q = poly.v[(i + 1) % n];
      const S px = as<S>(p.x);
      const S qx = as<S>(q.x);
      const S wp = as<S>(p.y) - alpha * px;
      const S wq = as<S>(q.y) - alpha * qx;
      if (wp == wq) continue;
      const S lo = wp < wq ? wp : wq;
      const S hi = wp < wq ? wq : wp;
      const bool hit = from_below ? (lo < w && w <= hi) : (lo <= w && w < hi);
      if (!hit) continue;
      xs.push_back(px + (w - wp) / (wq - wp) * (qx - px));
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 0; i + 1 < xs.size(); i += 2) out.emplace_back(xs[i], xs[i + 1]);
  }
  return out;
}

}  // namespace

QuadNum Region::area_exact() const {
  if (kind != RegionKind::polygon) throw DomainError("exact area needs a polygon region");
  QuadNum twice;
  for (const auto& poly : polygons) {
    const std::size_t n = poly.v.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& p = poly.v[i];
      const Vec2& q = poly.v[(i + 1) % n];
      twice += p.x * q.y - q.x * p.y;
    }
  }
  return twice / QuadNum(2);
}

BigFloat Region::area() const {
  if (kind == RegionKind::polygon) return area_exact().to_bigfloat();
  return graph.area;
}

std::vector<std::pair<QuadNum, QuadNum>> Region::chords(const QuadNum& alpha,
                                                        const QuadNum& w) const {
  if (kind != RegionKind::polygon) throw DomainError("exact chords need a polygon region");
  return polygon_chords<QuadNum>(*this, alpha, w);
}

std::vector<Chord> Region::chords(const BigFloat& alpha, const BigFloat& w) const {
  std::vector<Chord> out;
  if (kind == RegionKind::polygon) {
    for (auto& [lo, hi] : polygon_chords<BigFloat>(*this, alpha, w)) out.push_back({lo, hi});
    return out;
  }
  if (w < graph.w_lo || w > graph.w_hi) return out;
  out.push_back({graph.lower(w), graph.upper(w)});
  return out;
}

bool Region::inside_unit_square() const {
  if (kind == RegionKind::polygon) {
    for (const auto& poly : polygons) {
      for (const auto& p : poly.v) {
        if (p.x.sign() < 0 || p.y.sign() < 0 || p.x > QuadNum(1) || p.y > QuadNum(1)) return false;
      }
    }
    return true;
  }
  // Graph pairs are built inside the square; spot-check the boundary.
  const int n = 1000;
  for (int i = 0; i <= n; ++i) {
    const BigFloat w = graph.w_lo + (graph.w_hi - graph.w_lo) * i / n;
    const BigFloat lo = graph.lower(w);
    const BigFloat hi = graph.upper(w);
    // The graph with slope alpha is recovered through w only, so the p2
    // coordinates are checked by the placement rules instead.
    if (lo < 0 || hi > 1 || lo > hi) return false;
  }
  return true;
}

Region polygon_region(std::vector<Polygon> polys, std::string label) {
  Region r;
  r.kind = RegionKind::polygon;
  r.polygons = std::move(polys);
  r.label = std::move(label);
  return r;
}

namespace {

QuadNum pow2_inv(int k) {
  BigInt p = 1;
  p <<= static_cast<unsigned>(k);
  return QuadNum(Rational(BigInt(1), p));
}

// Centre of the chord: the point with p2 = 1/2 on the line of offset w.
QuadNum chord_center(const QuadNum& alpha, const QuadNum& w) {
  return (QuadNum::rational(1, 2) - w) / alpha;
}

QuadNum edge_distance(const QuadNum& c) { return qmin(c, QuadNum(1) - c); }

}  // namespace

RegionPlacement place_weight(const WeightFn& h, const QuadNum& alpha) {
  if (alpha.sign() <= 0) throw DomainError("region construction needs a positive slope");
  const Interval& W = h.support();
  if (!(W.length() < alpha)) {
    throw DomainError("window length " + W.length().str() + " is not below the slope " +
                      alpha.str() + "; split the scheme first");
  }
  RegionPlacement pl;
  pl.alpha = alpha;
  pl.K = (W.lo + W.hi) / QuadNum(2) + (QuadNum(1) - alpha) / QuadNum(2);
  // Sample points where c' h(u) <= 2 dist(u) has to be checked. dist is
  // concave in u, so for linear pieces the breakpoints suffice; curved
  // weights use the (smaller) distance at the ends and the maximum of h.
  std::vector<std::pair<QuadNum, QuadNum>> checks;  // (h value, 2 dist)
  auto two_dist = [&](const QuadNum& u) {
    return QuadNum(2) * edge_distance(chord_center(alpha, pl.K - u));
  };
  switch (h.kind()) {
    case WeightKind::indicator:
      checks.emplace_back(QuadNum(1), two_dist(W.lo));
      checks.emplace_back(QuadNum(1), two_dist(W.hi));
      break;
    case WeightKind::piecewise_linear:
      for (const auto& b : h.breakpoints()) checks.emplace_back(b.value, two_dist(b.x));
      break;
    case WeightKind::dome:
      checks.emplace_back(h.max_value(), qmin(two_dist(W.lo), two_dist(W.hi)));
      break;
  }
  const QuadNum hmax = h.max_value();
  for (int k = 0; k < 200; ++k) {
    const QuadNum c = pow2_inv(k);
    bool fits = c * hmax * alpha <= QuadNum(1);
    for (const auto& [v, d] : checks) fits = fits && c * v <= d;
    if (fits) {
      pl.rescale = c;
      return pl;
    }
  }
  throw DomainError("weight does not fit the unit square at any rescale");
}

Region region_from_weight(const WeightFn& h, const QuadNum& alpha,
                          std::optional<QuadNum> rescale) {
  RegionPlacement pl = place_weight(h, alpha);
  if (rescale) {
    if (rescale->sign() <= 0 || *rescale > pl.rescale) {
      throw DomainError("requested rescale " + rescale->str() + " does not fit; largest is " +
                        pl.rescale.str());
    }
    pl.rescale = *rescale;
  }
  const QuadNum& c = pl.rescale;
  Region r;
  r.rescale = c;
  r.label = h.describe();
  const Interval& W = h.support();
  // u = lo maps to the top offset K - lo.
  r.include_top = W.convention != Convention::half_open_left;
  r.include_bottom = W.convention != Convention::half_open_right;
  auto to_plane = [&](const QuadNum& w, const QuadNum& p1) { return Vec2{p1, w + alpha * p1}; };

  if (h.kind() == WeightKind::dome) {
    r.kind = RegionKind::graph_pair;
    const BigFloat a = alpha.to_bigfloat();
    const BigFloat K = pl.K.to_bigfloat();
    const BigFloat cf = c.to_bigfloat();
    auto centre = [a](const BigFloat& w) { return (BigFloat(0.5) - w) / a; };
    WeightFn hh = h;
    r.graph.w_lo = (pl.K - W.hi).to_bigfloat();
    r.graph.w_hi = (pl.K - W.lo).to_bigfloat();
    r.graph.lower = [=](const BigFloat& w) { return centre(w) - cf * hh.value(K - w) / 2; };
    r.graph.upper = [=](const BigFloat& w) { return centre(w) + cf * hh.value(K - w) / 2; };
    const QuadNum Kq = pl.K;
    r.graph.width_second_upper = [=](const BigFloat& w0, const BigFloat& w1) {
      // Bounds on h'' need exact arguments; widen to rationals with 2^-200 slack.
      const Rational slack(BigInt(1), BigInt(1) << 200);
      auto to_rat = [](const BigFloat& x) { return Rational(x.convert_to<Rational>()); };
      const QuadNum u0 = Kq - QuadNum(to_rat(w1) + slack);
      const QuadNum u1 = Kq - QuadNum(to_rat(w0) - slack);
      return cf * hh.second_derivative_range(u0, u1).second.to_bigfloat();
    };
    r.graph.area = (c * h.integral()).to_bigfloat();
    return r;
  }

  // Polygon: walk the upper chain with increasing w, then the lower chain back.
  std::vector<std::pair<QuadNum, QuadNum>> prof;  // (w, width)
  if (h.kind() == WeightKind::indicator) {
    prof.emplace_back(pl.K - W.hi, c);
    prof.emplace_back(pl.K - W.lo, c);
  } else {
    const auto& bps = h.breakpoints();
    for (auto it = bps.rbegin(); it != bps.rend(); ++it) prof.emplace_back(pl.K - it->x, c * it->value);
  }
  Polygon poly;
  auto push = [&](const Vec2& p) {
    if (poly.v.empty() || !(poly.v.back() == p)) poly.v.push_back(p);
  };
  for (const auto& [w, g] : prof) push(to_plane(w, chord_center(alpha, w) + g / QuadNum(2)));
  for (auto it = prof.rbegin(); it != prof.rend(); ++it) {
    push(to_plane(it->first, chord_center(alpha, it->first) - it->second / QuadNum(2)));
  }
  if (poly.v.size() > 1 && poly.v.front() == poly.v.back()) poly.v.pop_back();
  r.kind = RegionKind::polygon;
  r.polygons.push_back(std::move(poly));
  if (r.area_exact().sign() < 0) std::reverse(r.polygons[0].v.begin(), r.polygons[0].v.end());
  return r;
}

WeightFn width_function(const Region& p, const QuadNum& alpha) {
  if (p.kind != RegionKind::polygon) throw DomainError("exact width function needs a polygon");
  std::vector<QuadNum> ws;
  for (const auto& poly : p.polygons) {
    const std::size_t n = poly.v.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& a = poly.v[i];
      const Vec2& b = poly.v[(i + 1) % n];
      const QuadNum wa = a.y - alpha * a.x;
      if (wa == b.y - alpha * b.x) {
        throw DomainError("edge " + std::to_string(i) + " has slope alpha; the width function " +
                          "is discontinuous");
      }
      ws.push_back(wa);
    }
  }
  std::sort(ws.begin(), ws.end());
  ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
  std::vector<Breakpoint> pts;
  for (const auto& w : ws) {
    QuadNum len;
    for (const auto& [lo, hi] : p.chords(alpha, w)) len += hi - lo;
    pts.push_back({w, len});
  }
  return WeightFn::piecewise_linear(std::move(pts));
}

BigFloat width_at(const Region& p, const BigFloat& alpha, const BigFloat& w) {
  BigFloat len = 0;
  for (const auto& ch : p.chords(alpha, w)) len += ch.hi - ch.lo;
  return len;
}

// ----------------------------------------------------------------------
// Curvature.

BigFloat curvature_graph(const BigFloat& fp, const BigFloat& fpp) {
  const BigFloat s = 1 + fp * fp;
  return mp::abs(fpp) / (s * mp::sqrt(s));
}

BigFloat curvature_parametric(const BigFloat& dx, const BigFloat& dy, const BigFloat& ddx,
                              const BigFloat& ddy) {
  const BigFloat s = dx * dx + dy * dy;
  if (s == 0) throw DomainError("curve is not regular here (zero velocity)");
  return mp::abs(dx * ddy - dy * ddx) / (s * mp::sqrt(s));
}

BigFloat curvature_unit_speed(const BigFloat& ddx, const BigFloat& ddy) {
  return mp::sqrt(ddx * ddx + ddy * ddy);
}

BigFloat curvature_ellipse(const BigFloat& a, const BigFloat& b, const BigFloat& theta) {
  const BigFloat s = mp::sin(theta);
  const BigFloat c = mp::cos(theta);
  const BigFloat q = a * a * s * s + b * b * c * c;
  return a * b / (q * mp::sqrt(q));
}

std::string HypothesisReport::status_name() const {
  switch (status) {
    case Status::polygon_ok: return "polygon_ok";
    case Status::convex_ok: return "convex_ok";
    case Status::fail: return "fail";
  }
  return "?";
}

HypothesisReport check_brs_hypotheses(const Region& p, const QuadNum& alpha) {
  HypothesisReport rep;
  if (p.kind == RegionKind::polygon) {
    for (std::size_t k = 0; k < p.polygons.size(); ++k) {
      const auto& v = p.polygons[k].v;
      for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec2& a = v[i];
        const Vec2& b = v[(i + 1) % v.size()];
        if (((b.x - a.x) * alpha - (b.y - a.y)).is_zero()) {
          rep.status = HypothesisReport::Status::fail;
          rep.reason = "edge " + std::to_string(i) + " of polygon " + std::to_string(k) +
                       " has slope alpha = " + alpha.str();
          return rep;
        }
      }
    }
    rep.status = HypothesisReport::Status::polygon_ok;
    return rep;
  }
  const GraphPair& g = p.graph;
  if (!g.width_second_upper) {
    rep.reason = "no curvature certificate for this region";
    return rep;
  }
  const int cells = 1 << 10;
  for (int i = 0; i < cells; ++i) {
    const BigFloat w0 = g.w_lo + (g.w_hi - g.w_lo) * i / cells;
    const BigFloat w1 = g.w_lo + (g.w_hi - g.w_lo) * (i + 1) / cells;
    const BigFloat bound = g.width_second_upper(w0, w1);
    if (bound >= 0) {
      rep.status = HypothesisReport::Status::fail;
      rep.reason = "chord length is not strictly concave on offsets [" +
                   format_double(w0.convert_to<double>()) + ", " +
                   format_double(w1.convert_to<double>()) + "] (second derivative bound " +
                   format_double(bound.convert_to<double>()) + ")";
      return rep;
    }
  }
  rep.status = HypothesisReport::Status::convex_ok;
  return rep;
}

DomeDecomposition decompose_dome(const WeightFn& h, int grid_points) {
  if (h.kind() != WeightKind::dome) throw DomainError("decomposition needs a C2 dome weight");
  DomeDecomposition dec;
  const QuadNum L = h.support().length();
  dec.radius = L / QuadNum(2) + L / QuadNum(10);
  dec.center = (h.support().lo + h.support().hi) / QuadNum(2);
  const QuadNum s2 = h.sup_second_derivative();
  // f'' <= -2/R, so (c1 f - h)'' <= -2 c1 / R + sup|h''| = -1.
  dec.c1 = dec.radius * (s2 + QuadNum(1)) / QuadNum(2);
  dec.second_bound = (QuadNum(-2) * dec.c1 / dec.radius + s2).to_bigfloat();
  const BigFloat R = dec.radius.to_bigfloat();
  const BigFloat uc = dec.center.to_bigfloat();
  const BigFloat c1 = dec.c1.to_bigfloat();
  dec.grid_points = grid_points;
  bool first = true;
  for (int i = 1; i <= grid_points; ++i) {
    const BigFloat x = -R + 2 * R * i / (grid_points + 1);
    const BigFloat q = R * R - x * x;
    const BigFloat f2 = -2 * R * R / (q * mp::sqrt(q));
    const BigFloat v = c1 * f2 - h.derivative(uc + x, 2);
    if (first || v > dec.grid_max) dec.grid_max = v;
    first = false;
  }
  dec.ok = dec.second_bound < 0 && dec.grid_max < 0;
  return dec;
}

DomeRegions dome_regions(const WeightFn& h, const DomeDecomposition& dec, const QuadNum& alpha) {
  if (alpha.sign() <= 0) throw DomainError("region construction needs a positive slope");
  const QuadNum twoR = QuadNum(2) * dec.radius;
  if (!(twoR < alpha)) {
    throw DomainError("disc support " + twoR.str() + " is not below the slope; split first");
  }
  DomeRegions out;
  out.placement.alpha = alpha;
  out.placement.K = dec.center + (QuadNum(1) - alpha) / QuadNum(2);
  // Width c' c1 f(u) <= c' c1 2R; chord fits when c' c1 R <= 1/2 - R/alpha
  // and c' c1 2R alpha <= 1.
  const QuadNum room = QuadNum::rational(1, 2) - dec.radius / alpha;
  QuadNum c(1);
  while (!(c * dec.c1 * dec.radius <= room && c * dec.c1 * twoR * alpha <= QuadNum(1))) {
    c /= QuadNum(2);
  }
  out.placement.rescale = c;

  const BigFloat a = alpha.to_bigfloat();
  const BigFloat K = out.placement.K.to_bigfloat();
  const BigFloat cf = c.to_bigfloat();
  const BigFloat R = dec.radius.to_bigfloat();
  const BigFloat uc = dec.center.to_bigfloat();
  const BigFloat c1 = dec.c1.to_bigfloat();
  auto centre = [a](const BigFloat& w) { return (BigFloat(0.5) - w) / a; };
  auto f = [R, uc](const BigFloat& u) {
    const BigFloat x = u - uc;
    const BigFloat q = R * R - x * x;
    return q > 0 ? BigFloat(2 * mp::sqrt(q)) : BigFloat(0);
  };
  WeightFn hh = h;

  for (int part = 0; part < 2; ++part) {
    Region r;
    r.kind = RegionKind::graph_pair;
    r.rescale = c;
    r.label = part == 0 ? "c1 * disc chord" : "c1 * disc chord - h";
    r.graph.w_lo = K - uc - R;
    r.graph.w_hi = K - uc + R;
    auto width = [=](const BigFloat& w) {
      const BigFloat u = K - w;
      BigFloat g = c1 * f(u);
      if (part == 1) g -= hh.value(u);
      return cf * g;
    };
    r.graph.lower = [=](const BigFloat& w) { return centre(w) - width(w) / 2; };
    r.graph.upper = [=](const BigFloat& w) { return centre(w) + width(w) / 2; };
    const QuadNum Kq = out.placement.K;
    r.graph.width_second_upper = [=](const BigFloat& w0, const BigFloat& w1) {
      BigFloat bound = -2 * c1 / R;
      if (part == 1) {
        const Rational slack(BigInt(1), BigInt(1) << 200);
        auto to_rat = [](const BigFloat& x) { return Rational(x.convert_to<Rational>()); };
        const QuadNum u0 = Kq - QuadNum(to_rat(w1) + slack);
        const QuadNum u1 = Kq - QuadNum(to_rat(w0) - slack);
        bound -= hh.second_derivative_range(u0, u1).first.to_bigfloat();
      }
      return cf * bound;
    };
    // integral of f is the disc area pi R^2.
    BigFloat area = c1 * boost::math::constants::pi<BigFloat>() * R * R;
    if (part == 1) area -= h.integral().to_bigfloat();
    r.graph.area = cf * area;
    (part == 0 ? out.disc : out.rest) = std::move(r);
  }
  return out;
}

}  // namespace qcps
