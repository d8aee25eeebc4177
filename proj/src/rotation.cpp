// Copyright 2026 The qcps Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcps/rotation.hpp"

#include <algorithm>
#include <cmath>

namespace qcps {

QuadNum discrete_deficiency(const Interval& S, const QuadNum& alpha, const QuadNum& x,
                            long long n) {
  if (n < 0) throw DomainError("deficiency needs n >= 0");
  long long hits = 0;
  QuadNum v = x.frac();
  const QuadNum step = alpha.frac();
  for (long long k = 0; k < n; ++k) {
    if (S.contains(v)) ++hits;
    v += step;
    if (v >= QuadNum(1)) v -= QuadNum(1);
  }
  return QuadNum(hits) - QuadNum(n) * S.length();
}

std::string KestenResult::describe() const {
  if (in_lattice) return "in_lattice(" + m.str() + "," + n.str() + ")";
  return "not_in (m = " + m.str() + ", n = " + n.str() + ")";
}

KestenResult kesten_test(const QuadNum& L, const QuadNum& alpha) {
  if (alpha.is_rational()) throw DomainError("Kesten test needs an irrational alpha");
  if (L.d() != 0 && !L.is_rational() && L.d() != alpha.d()) {
    throw FieldMismatch("length and slope lie in different fields");
  }
  KestenResult r;
  r.n = L.b() / alpha.b();
  r.m = L.a() - r.n * alpha.a();
  r.in_lattice = mp::denominator(r.n) == 1 && mp::denominator(r.m) == 1;
  return r;
}

namespace {

template <class S>
struct Num;

template <>
struct Num<QuadNum> {
  static QuadNum floor(const QuadNum& x) { return QuadNum(Rational(x.floor())); }
  static BigInt ifloor(const QuadNum& x) { return x.floor(); }
  static QuadNum of(const QuadNum& x) { return x; }
};

template <>
struct Num<BigFloat> {
  static BigFloat floor(const BigFloat& x) { return mp::floor(x); }
  static BigInt ifloor(const BigFloat& x) { return mp::floor(x).convert_to<BigInt>(); }
  static BigFloat of(const QuadNum& x) { return x.to_bigfloat(); }
};

// Per-edge chord data of a polygon region: p1(w) = base + k (w - w0) for
// offsets w between w0 and w1.
template <class S>
class ChordTable {
 public:
  ChordTable(const Region& r, const S& alpha) : region_(r), alpha_(alpha) {
    if (r.kind != RegionKind::polygon) return;
    bool first = true;
    for (const auto& poly : r.polygons) {
      std::vector<Edge> edges;
      const std::size_t n = poly.v.size();
      for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = poly.v[i];
        const Vec2& q = poly.v[(i + 1) % n];
        const S px = Num<S>::of(p.x);
        const S qx = Num<S>::of(q.x);
        const S wp = Num<S>::of(p.y) - alpha * px;
        const S wq = Num<S>::of(q.y) - alpha * qx;
        if (first || wp > top_) top_ = wp;
        if (first || wp < bottom_) bottom_ = wp;
        first = false;
        if (wp == wq) continue;
        Edge e;
        const bool up = wp < wq;
        e.w0 = up ? wp : wq;
        e.w1 = up ? wq : wp;
        e.base = up ? px : qx;
        e.k = (qx - px) / (wq - wp);
        edges.push_back(std::move(e));
      }
      polys_.push_back(std::move(edges));
    }
    empty_ = first;
  }

  void chords(const S& w, std::vector<std::pair<S, S>>& out) const {
    out.clear();
    if (region_.kind == RegionKind::graph_pair) {
      if constexpr (std::is_same_v<S, BigFloat>) {
        for (const auto& c : region_.chords(alpha_, w)) out.emplace_back(c.lo, c.hi);
        return;
      } else {
        throw DomainError("curved regions only have a numeric chord path");
      }
    }
    if (empty_ || w > top_ || w < bottom_) return;
    if (w == bottom_ && !region_.include_bottom) return;
    if (w == top_ && !region_.include_top) return;
    const bool from_below = w == top_;
    for (const auto& edges : polys_) {
      xs_.clear();
      for (const auto& e : edges) {
        const bool hit = from_below ? (e.w0 < w && w <= e.w1) : (e.w0 <= w && w < e.w1);
        if (hit) xs_.push_back(e.base + e.k * (w - e.w0));
      }
      std::sort(xs_.begin(), xs_.end());
      for (std::size_t i = 0; i + 1 < xs_.size(); i += 2) out.emplace_back(xs_[i], xs_[i + 1]);
    }
  }

 private:
  struct Edge {
    S w0, w1, base, k;
  };
  const Region& region_;
  S alpha_;
  std::vector<std::vector<Edge>> polys_;
  S top_, bottom_;
  bool empty_ = true;
  mutable std::vector<S> xs_;
};

template <class S>
struct Segment {
  S s0, s1;
  // p1 at s0 and the (constant) offset p2 - alpha p1.
  S e1, w;
  BigInt cx, cy;
};

template <class S>
class Walker {
 public:
  Walker(const S& alpha, const S& x1, const S& x2) : alpha_(alpha) {
    if (!(alpha > 0)) throw DomainError("flow slope must be positive");
    cx_ = Num<S>::ifloor(x1);
    cy_ = Num<S>::ifloor(x2);
    p1_ = x1 - Num<S>::floor(x1);
    p2_ = x2 - Num<S>::floor(x2);
    s_ = S(0);
  }

  Segment<S> next() {
    Segment<S> g;
    const S dx = S(1) - p1_;
    const S dy = (S(1) - p2_) / alpha_;
    const bool wx = !(dy < dx);
    const bool wy = !(dx < dy);
    const S dt = wx ? dx : dy;
    g.s0 = s_;
    g.s1 = s_ + dt;
    g.e1 = p1_;
    g.w = p2_ - alpha_ * p1_;
    g.cx = cx_;
    g.cy = cy_;
    s_ = g.s1;
    if (wx) {
      p1_ = S(0);
      cx_ += 1;
    } else {
      p1_ += dt;
    }
    if (wy) {
      p2_ = S(0);
      cy_ += 1;
    } else {
      p2_ += alpha_ * dt;
    }
    return g;
  }

 private:
  S alpha_;
  S p1_, p2_, s_;
  BigInt cx_, cy_;
};

template <class S>
S overlap(const S& a0, const S& a1, const S& b0, const S& b1) {
  const S lo = a0 < b0 ? b0 : a0;
  const S hi = a1 < b1 ? a1 : b1;
  return hi > lo ? S(hi - lo) : S(0);
}

template <class S>
S inside_time(const std::vector<std::pair<S, S>>& chords, const S& e1, const S& len) {
  S acc(0);
  const S end = e1 + len;
  for (const auto& [lo, hi] : chords) acc += overlap(e1, end, lo, hi);
  return acc;
}

template <class S>
std::vector<S> delta_pass(const Region& P, const S& alpha, const S& x1, const S& x2,
                          const std::vector<S>& times, const S& area) {
  std::vector<S> out;
  out.reserve(times.size());
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (times[i] < times[i - 1]) throw DomainError("times must be nondecreasing");
  }
  ChordTable<S> table(P, alpha);
  Walker<S> walk(alpha, x1, x2);
  std::vector<std::pair<S, S>> chords;
  S acc(0);
  std::size_t i = 0;
  while (i < times.size() && times[i] <= S(0)) {
    if (times[i] < S(0)) throw DomainError("times must be >= 0");
    out.push_back(S(0));
    ++i;
  }
  while (i < times.size()) {
    const Segment<S> g = walk.next();
    table.chords(g.w, chords);
    while (i < times.size() && times[i] <= g.s1) {
      const S part = inside_time(chords, g.e1, S(times[i] - g.s0));
      out.push_back(acc + part - times[i] * area);
      ++i;
    }
    acc += inside_time(chords, g.e1, S(g.s1 - g.s0));
  }
  return out;
}

}  // namespace

std::vector<OrbitSegment> orbit_segments(const Vec2& x, const QuadNum& alpha,
                                         const QuadNum& t_max) {
  std::vector<OrbitSegment> out;
  if (t_max.sign() <= 0) return out;
  Walker<QuadNum> walk(alpha, x.x, x.y);
  for (;;) {
    Segment<QuadNum> g = walk.next();
    OrbitSegment seg;
    seg.s_start = g.s0;
    seg.s_end = g.s1 < t_max ? g.s1 : t_max;
    seg.cell_x = g.cx;
    seg.cell_y = g.cy;
    seg.entry = {g.e1, g.w + alpha * g.e1};
    out.push_back(std::move(seg));
    if (g.s1 >= t_max) break;
  }
  return out;
}

QuadNum delta_t(const Region& P, const QuadNum& alpha, const Vec2& x, const QuadNum& t) {
  return delta_at(P, alpha, x, {t}).front();
}

std::vector<QuadNum> delta_at(const Region& P, const QuadNum& alpha, const Vec2& x,
                              const std::vector<QuadNum>& times) {
  if (P.kind != RegionKind::polygon) {
    throw DomainError("exact Delta_t needs a polygon region; use the numeric path");
  }
  return delta_pass<QuadNum>(P, alpha, x.x, x.y, times, P.area_exact());
}

std::vector<BigFloat> delta_at_numeric(const Region& P, const BigFloat& alpha, const BigFloat& x1,
                                       const BigFloat& x2, const std::vector<BigFloat>& times) {
  return delta_pass<BigFloat>(P, alpha, x1, x2, times, P.area());
}

DiscrepancyTrace delta_sup_scan(const Region& P, const BigFloat& alpha, const BigFloat& x1,
                                const BigFloat& x2, const std::vector<BigFloat>& checkpoints,
                                int samples_per_decade) {
  DiscrepancyTrace tr;
  tr.checkpoints = checkpoints;
  std::sort(tr.checkpoints.begin(), tr.checkpoints.end());
  if (tr.checkpoints.empty()) return tr;
  const BigFloat t_max = tr.checkpoints.back();
  const BigFloat area = P.area();

  // Row times: checkpoints plus log-spaced samples, merged.
  std::vector<BigFloat> rows_at = tr.checkpoints;
  if (samples_per_decade > 0) {
    const double top = std::log10(t_max.convert_to<double>());
    for (int k = 0;; ++k) {
      const double e = static_cast<double>(k) / samples_per_decade;
      if (e > top) break;
      rows_at.push_back(BigFloat(std::pow(10.0, e)));
    }
  }
  std::sort(rows_at.begin(), rows_at.end());
  rows_at.erase(std::unique(rows_at.begin(), rows_at.end()), rows_at.end());

  ChordTable<BigFloat> table(P, alpha);
  Walker<BigFloat> walk(alpha, x1, x2);
  std::vector<std::pair<BigFloat, BigFloat>> chords;
  BigFloat acc = 0;  // time in P up to the segment start
  BigFloat sup = 0;
  BigFloat last_t = 0, last_d = 0;
  long long since = 0;
  std::size_t next_row = 0, next_cp = 0;
  const BigFloat slope_tol("1e-40");

  std::vector<BigFloat> events;
  for (;;) {
    const Segment<BigFloat> g = walk.next();
    table.chords(g.w, chords);
    const BigFloat s1 = g.s1 < t_max ? g.s1 : t_max;
    events.clear();
    events.push_back(g.s0);
    for (const auto& [lo, hi] : chords) {
      for (const BigFloat& edge : {lo, hi}) {
        const BigFloat te = g.s0 + (edge - g.e1);
        if (te > g.s0 && te < s1) events.push_back(te);
      }
    }
    while (next_row < rows_at.size() && rows_at[next_row] <= s1) events.push_back(rows_at[next_row++]);
    events.push_back(s1);
    std::sort(events.begin(), events.end());
    for (const BigFloat& te : events) {
      const BigFloat d = acc + inside_time(chords, g.e1, BigFloat(te - g.s0)) - te * area;
      if (te > last_t + BigFloat("1e-30")) {
        const BigFloat slope = (d - last_d) / (te - last_t);
        if (mp::abs(slope + area) > slope_tol && mp::abs(slope - 1 + area) > slope_tol) {
          // A chord end between two consecutive events would show up here.
          tr.slopes_ok = false;
        }
      }
      last_t = te;
      last_d = d;
      ++since;
      ++tr.events;
      if (mp::abs(d) > sup) sup = mp::abs(d);
      while (next_cp < tr.checkpoints.size() && tr.checkpoints[next_cp] <= te) {
        tr.checkpoint_sup.push_back(sup);
        ++next_cp;
      }
      if (!tr.rows.empty() && tr.rows.back().t == te) continue;
      if (std::binary_search(rows_at.begin(), rows_at.end(), te)) {
        tr.rows.push_back({te, d, sup, since});
        since = 0;
      }
    }
    acc += inside_time(chords, g.e1, BigFloat(s1 - g.s0));
    if (s1 >= t_max) break;
  }
  return tr;
}

}  // namespace qcps
