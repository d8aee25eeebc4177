// Copyright 2026 The qcps Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcps/bdlab.hpp"

#include <algorithm>
#include <random>
#include <tuple>

namespace qcps {

namespace {

const QuadNum& qmax(const QuadNum& a, const QuadNum& b) { return quick_less(a, b) ? b : a; }
const QuadNum& qmin(const QuadNum& a, const QuadNum& b) { return quick_less(b, a) ? b : a; }

bool atom_less(const Atom& a, const Atom& b) { return quick_less(a.position, b.position); }

}  // namespace

bool quick_less(const QuadNum& a, const QuadNum& b) { return direct_less(a, b); }

CombMeasure realize_comb(const Scheme& s, const std::optional<WeightFn>& h, const QuadNum& T,
                         int jobs) {
  if (T.sign() <= 0) throw DomainError("comb interval needs T > 0");
  CombMeasure c;
  c.lo = QuadNum(0);
  c.hi = T;
  for (const auto& p : enumerate_points(s, QuadNum(0), T, jobs)) {
    QuadNum mass = h ? h->value(p.internal) : QuadNum(1);
    if (mass.is_zero()) continue;
    c.atoms.push_back({p.direct, std::move(mass)});
  }
  return c;
}

CombMeasure lattice_comb(const QuadNum& spacing, const QuadNum& offset, const QuadNum& T) {
  if (spacing.sign() <= 0) throw DomainError("comb spacing must be positive");
  CombMeasure c;
  c.lo = QuadNum(0);
  c.hi = T;
  // First k with offset + k spacing >= 0.
  BigInt k = (-offset / spacing).ceil();
  for (QuadNum x = offset + QuadNum(Rational(k)) * spacing; !(T < x); x += spacing) {
    c.atoms.push_back({x, QuadNum(1)});
  }
  return c;
}

Combination linear_combination(
    const std::vector<std::tuple<QuadNum, CombMeasure, QuadNum>>& terms) {
  if (terms.empty()) throw DomainError("empty combination");
  Combination out;
  out.comb.lo = std::get<1>(terms.front()).lo;
  out.comb.hi = std::get<1>(terms.front()).hi;
  out.density = QuadNum(0);
  std::vector<Atom> all;
  for (const auto& [coef, comb, m] : terms) {
    if (coef.sign() <= 0) throw DomainError("combination coefficients must be positive");
    if (!(comb.lo == out.comb.lo) || !(comb.hi == out.comb.hi)) {
      throw DomainError("combs live on different intervals");
    }
    out.density += coef * m;
    for (const auto& a : comb.atoms) all.push_back({a.position, coef * a.mass});
  }
  std::stable_sort(all.begin(), all.end(), atom_less);
  for (auto& a : all) {
    if (!out.comb.atoms.empty() && out.comb.atoms.back().position == a.position) {
      out.comb.atoms.back().mass += a.mass;
    } else {
      out.comb.atoms.push_back(std::move(a));
    }
  }
  return out;
}

DefectProfile defect_profile(const CombMeasure& w, const QuadNum& m,
                             const std::vector<QuadNum>& checkpoints) {
  if (m.sign() <= 0) throw DomainError("target density must be positive");
  DefectProfile p;
  p.m = m;
  p.before.reserve(w.atoms.size());
  p.after.reserve(w.atoms.size());
  std::vector<QuadNum> cps = checkpoints;
  std::sort(cps.begin(), cps.end(), quick_less);

  QuadNum S(0);
  QuadNum sup(0);
  QuadNum inf(0);
  std::size_t next = 0;
  auto emit = [&](const QuadNum& T, long long count) {
    const QuadNum end = S - m * T;
    const QuadNum hi = qmax(sup, end);
    const QuadNum lo = qmin(inf, end);
    p.checkpoints.push_back({T, count, qmax(hi.abs(), lo.abs()), hi - lo});
  };
  for (std::size_t i = 0; i < w.atoms.size(); ++i) {
    const auto& a = w.atoms[i];
    while (next < cps.size() && quick_less(cps[next], a.position)) {
      emit(cps[next], static_cast<long long>(i));
      ++next;
    }
    const QuadNum mx = m * a.position;
    QuadNum before = S - mx;
    S += a.mass;
    QuadNum after = S - mx;
    // Masses are nonnegative, so before <= after.
    if (quick_less(before, inf)) inf = before;
    if (quick_less(sup, after)) sup = after;
    p.before.push_back(std::move(before));
    p.after.push_back(std::move(after));
  }
  for (; next < cps.size(); ++next) emit(cps[next], static_cast<long long>(w.atoms.size()));
  const QuadNum end = S - m * w.hi;
  p.sup = qmax(sup, end);
  p.inf = qmin(inf, end);
  return p;
}

QuadNum defect_at(const CombMeasure& w, const QuadNum& m, const QuadNum& t) {
  QuadNum S(0);
  for (const auto& a : w.atoms) {
    if (quick_less(t, a.position)) break;
    S += a.mass;
  }
  return S - m * t;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::consistent_with_bd:
      return "consistent_with_bd";
    case Verdict::inconsistent:
      return "inconsistent";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

VerdictReport judge(const DefectProfile& p, const VerdictRule& rule) {
  VerdictReport r;
  if (p.checkpoints.empty()) return r;
  const auto base = std::find_if(p.checkpoints.begin(), p.checkpoints.end(),
                                 [&](const DefectCheckpoint& c) { return !quick_less(c.T, rule.t0); });
  if (base != p.checkpoints.end()) {
    const double b = base->max_abs.approx();
    double worst = 0;
    for (auto it = base; it != p.checkpoints.end(); ++it) {
      worst = std::max(worst, b > 0 ? it->max_abs.approx() / b : (it->max_abs.is_zero() ? 0 : 1e300));
    }
    r.plateau_ratio = worst;
    r.plateau = worst <= rule.ratio;
  }
  r.growth_amount = p.checkpoints.back().max_abs.approx() - p.checkpoints.front().max_abs.approx();
  r.growth = p.checkpoints.size() > 1 && r.growth_amount >= rule.growth;
  if (r.plateau && !r.growth) {
    r.verdict = Verdict::consistent_with_bd;
  } else if (r.growth && !r.plateau) {
    r.verdict = Verdict::inconsistent;
  }
  return r;
}

// ----------------------------------------------------------------------

Measure lebesgue(const QuadNum& m) {
  Measure out;
  out.density = m;
  out.label = "lebesgue";
  return out;
}

Measure from_comb(const CombMeasure& c, std::string label) {
  Measure out;
  out.atoms = c.atoms;
  out.density = QuadNum(0);
  out.label = std::move(label);
  return out;
}

Measure periodic_comb(const QuadNum& spacing, const QuadNum& T, std::string label) {
  Measure out = from_comb(lattice_comb(spacing, QuadNum(0), T), std::move(label));
  out.period = spacing;
  return out;
}

namespace {

struct Prefix {
  std::vector<QuadNum> pos;
  // mass of atoms [0, i).
  std::vector<QuadNum> cum;
};

Prefix prefix_of(const Measure& mu) {
  Prefix p;
  p.cum.push_back(QuadNum(0));
  for (const auto& a : mu.atoms) {
    p.pos.push_back(a.position);
    p.cum.push_back(p.cum.back() + a.mass);
  }
  return p;
}

// mu([a, b]) for closed intervals.
QuadNum closed_mass(const Measure& mu, const Prefix& p, const QuadNum& a, const QuadNum& b) {
  const auto first = std::lower_bound(p.pos.begin(), p.pos.end(), a, quick_less);
  const auto last = std::upper_bound(p.pos.begin(), p.pos.end(), b, quick_less);
  const auto i = first - p.pos.begin();
  const auto j = last - p.pos.begin();
  QuadNum m = j > i ? p.cum[j] - p.cum[i] : QuadNum(0);
  return m + mu.density * (b - a);
}

}  // namespace

CompareReport bd_compare(const Measure& mu, const Measure& nu, const QuadNum& T,
                         long long interval_samples, unsigned long long seed) {
  if (T.sign() <= 0) throw DomainError("comparison interval needs T > 0");
  CompareReport r;
  // G(t) = mu([0,t]) - nu([0,t]); sup over intervals is sup G - inf G with
  // G taken on both sides of every atom and at the ends.
  std::vector<Atom> events;
  for (const auto& a : mu.atoms) {
    if (!quick_less(T, a.position)) events.push_back(a);
  }
  for (const auto& a : nu.atoms) {
    if (!quick_less(T, a.position)) events.push_back({a.position, -a.mass});
  }
  std::stable_sort(events.begin(), events.end(), atom_less);
  const QuadNum slope = mu.density - nu.density;
  QuadNum S(0);
  QuadNum sup(0);
  QuadNum inf(0);
  for (std::size_t i = 0; i < events.size();) {
    const QuadNum x = events[i].position;
    const QuadNum base = slope * x;
    const QuadNum left = S + base;
    while (i < events.size() && events[i].position == x) S += events[i++].mass;
    const QuadNum right = S + base;
    sup = qmax(sup, qmax(left, right));
    inf = qmin(inf, qmin(left, right));
  }
  const QuadNum end = S + slope * T;
  sup = qmax(sup, end);
  inf = qmin(inf, end);
  r.c_event = sup - inf;

  const Prefix pm = prefix_of(mu);
  const Prefix pn = prefix_of(nu);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, T.approx());
  r.c_sampled = QuadNum(0);
  for (long long k = 0; k < interval_samples; ++k) {
    double x = dist(rng);
    double y = dist(rng);
    if (y < x) std::swap(x, y);
    const QuadNum a{Rational(x)};
    const QuadNum b{Rational(y)};
    const QuadNum v = (closed_mass(mu, pm, a, b) - closed_mass(nu, pn, a, b)).abs();
    r.c_sampled = qmax(r.c_sampled, v);
  }
  r.samples = interval_samples;
  r.sampled_within_event = !quick_less(r.c_event, r.c_sampled);

  // A p-periodic measure carrying mass M per period is within M of the
  // Lebesgue multiple with the same density.
  const Measure* periodic = mu.period ? &mu : (nu.period ? &nu : nullptr);
  if (periodic != nullptr) {
    const Measure& other = periodic == &mu ? nu : mu;
    const QuadNum& p = *periodic->period;
    QuadNum per_period = periodic->density * p;
    for (const auto& a : periodic->atoms) {
      if (!quick_less(a.position, p)) break;
      if (a.position.sign() >= 0) per_period += a.mass;
    }
    if (other.atoms.empty() && other.density * p == per_period) {
      r.periodic_bound = per_period;
      r.periodic_bound_holds = !quick_less(per_period, r.c_event);
    }
  }
  return r;
}

PointsetReport pointset_measure_equiv_check(const std::vector<QuadNum>& a,
                                            const std::vector<QuadNum>& b) {
  PointsetReport r;
  auto min_gap = [](const std::vector<QuadNum>& v) {
    std::optional<QuadNum> g;
    for (std::size_t i = 1; i < v.size(); ++i) {
      QuadNum d = v[i] - v[i - 1];
      if (d.sign() <= 0) throw DomainError("point set is not strictly increasing");
      if (!g || quick_less(d, *g)) g = d;
    }
    return g;
  };
  const auto ga = min_gap(a);
  const auto gb = min_gap(b);
  if (!ga && !gb) throw DomainError("point sets need two points to fix r");
  r.r = ga && gb ? qmin(*ga, *gb) : (ga ? *ga : *gb);

  const std::size_t n = std::min(a.size(), b.size());
  r.pairs = static_cast<long long>(n);
  r.max_displacement = QuadNum(0);
  for (std::size_t i = 0; i < n; ++i) {
    const QuadNum d = (a[i] - b[i]).abs();
    r.max_displacement = qmax(r.max_displacement, d);
    // Points of b strictly between a[i] and b[i].
    const QuadNum& lo = qmin(a[i], b[i]);
    const QuadNum& hi = qmax(a[i], b[i]);
    const auto first = std::upper_bound(b.begin(), b.end(), lo, quick_less);
    const auto last = std::lower_bound(b.begin(), b.end(), hi, quick_less);
    const long long between = last > first ? static_cast<long long>(last - first) : 0;
    if (quick_less(d / r.r + QuadNum(1), QuadNum(between))) r.chain_ok = false;
  }

  Measure ma;
  Measure mb;
  ma.density = QuadNum(0);
  mb.density = QuadNum(0);
  for (std::size_t i = 0; i < n; ++i) ma.atoms.push_back({a[i], QuadNum(1)});
  for (std::size_t i = 0; i < n; ++i) mb.atoms.push_back({b[i], QuadNum(1)});
  const QuadNum T = n == 0 ? QuadNum(1) : qmax(a[n - 1], b[n - 1]);
  r.comb_defect = bd_compare(ma, mb, T.sign() > 0 ? T : QuadNum(1), 0).c_event;
  r.displacement_bound = QuadNum(2) * r.max_displacement / r.r;
  r.corrected_bound = QuadNum(2) * (r.max_displacement / r.r + QuadNum(1));
  r.displacement_bound_holds = !quick_less(r.displacement_bound, r.comb_defect);
  r.corrected_bound_holds = !quick_less(r.corrected_bound, r.comb_defect);
  return r;
}

// ----------------------------------------------------------------------

namespace {

QuadNum fit_length(const WeightFn& h) {
  // The dome goes through a disc decomposition whose support is 1.2 |W|.
  QuadNum L = h.support().length();
  if (h.kind() == WeightKind::dome) L *= QuadNum::rational(6, 5);
  return L;
}

}  // namespace

BrsConstruction wcps_to_brs(const Scheme& s, const WeightFn& h) {
  if (!(s.basis == Mat2::identity())) {
    throw DomainError("wcps_to_brs needs a scheme over Z^2; normalize first");
  }
  BrsConstruction out;
  out.alpha = s.slope;
  if (out.alpha.sign() <= 0) throw DomainError("slope must be positive");
  const QuadNum L = fit_length(h);
  long long n = 1;
  while (!quick_less(L / QuadNum(n), out.alpha)) ++n;
  out.split = n;
  const QuadNum inv = QuadNum::rational(1, n);
  const auto subs = split_scheme(s, n);
  for (const auto& sub : subs) {
    BrsPiece piece;
    std::optional<Vec2> hdir;
    if (sub.axes == Axes::explicit_dir) hdir = sub.internal_dir;
    piece.scheme = build_scheme(Mat2::identity(),
                               Vec2{sub.translate.x * inv, sub.translate.y * inv}, sub.slope,
                               sub.window.scaled(inv), sub.axes, hdir);
    piece.weight = n == 1 ? h : h.rescaled_argument(inv);
    piece.placement = place_weight(piece.weight, out.alpha);
    piece.region = region_from_weight(piece.weight, out.alpha, piece.placement.rescale);
    const QuadNum y0 = (piece.placement.K - piece.scheme.internal(piece.scheme.translate)).frac();
    piece.start = Vec2{QuadNum(0), y0};
    piece.hypotheses = check_brs_hypotheses(piece.region, out.alpha);
    out.pieces.push_back(std::move(piece));
  }
  if (h.kind() == WeightKind::indicator) {
    out.note =
        "indicator weight: the region has edges of slope alpha, so bounded remainder status "
        "follows the Kesten criterion on the window length";
  } else if (h.kind() == WeightKind::dome) {
    out.note = "dome weight: the region is handled through its disc decomposition";
  }
  return out;
}

std::vector<BridgeReport> bridge_identity_check(const BrsPiece& piece, long long t_max,
                                                bool numeric_only) {
  if (t_max < 0) throw DomainError("bridge check needs t >= 0");
  const Scheme& s = piece.scheme;
  const QuadNum& alpha = s.slope;
  const QuadNum& c = piece.region.rescale;
  const QuadNum cint = c * piece.weight.integral();
  const bool exact = !numeric_only && piece.region.kind == RegionKind::polygon;
  const Interval& W = s.window;
  const QuadNum uz = s.internal(s.translate);

  std::vector<BridgeReport> out;
  std::vector<QuadNum> times;
  std::vector<BigFloat> ftimes;
  for (long long t = 0; t <= t_max; ++t) {
    times.emplace_back(t);
    ftimes.emplace_back(t);
  }
  std::vector<QuadNum> line;
  std::vector<BigFloat> fline;
  if (exact) {
    line = delta_at(piece.region, alpha, piece.start, times);
  }
  fline = delta_at_numeric(piece.region, alpha.to_bigfloat(), piece.start.x.to_bigfloat(),
                           piece.start.y.to_bigfloat(), ftimes);

  QuadNum sum(0);
  BigFloat fsum = 0;
  for (long long t = 0; t <= t_max; ++t) {
    BridgeReport r;
    r.t = t;
    r.exact = exact;
    if (t > 0) {
      // Lattice points y = gamma + z with gamma1 = t - 1: u = gamma2 + u(z) - alpha (t - 1).
      const QuadNum shift = uz - alpha * QuadNum(t - 1);
      BigInt g = (W.lo - shift).floor() - 1;
      const BigInt g_end = (W.hi - shift).ceil() + 1;
      for (; g <= g_end; g += 1) {
        const QuadNum u = QuadNum(Rational(g)) + shift;
        if (!W.contains(u)) continue;
        if (exact) sum += piece.weight.value(u);
        fsum += piece.weight.value(u.to_bigfloat());
      }
    }
    r.comb_side_numeric = c.to_bigfloat() * fsum - BigFloat(t) * cint.to_bigfloat();
    r.line_side_numeric = fline[static_cast<std::size_t>(t)];
    r.difference_numeric = r.comb_side_numeric - r.line_side_numeric;
    if (exact) {
      r.comb_side = c * sum - QuadNum(t) * cint;
      r.line_side = line[static_cast<std::size_t>(t)];
      r.difference = r.comb_side - r.line_side;
    }
    out.push_back(std::move(r));
  }
  return out;
}

PipelineReport main_theorem_pipeline(const Scheme& s, const WeightFn& h,
                                     const PipelineOptions& opt) {
  PipelineReport r;
  r.scheme = s;
  r.weight = h;
  if (h.kind() != WeightKind::indicator && !h.continuous_supported()) {
    throw DomainError("weight must be continuous and vanish at the ends of its support");
  }

  // (1) normalization to Z^2.
  Scheme z2 = s;
  WeightFn hz = h;
  if (!(s.basis == Mat2::identity())) {
    r.normal = quad_normalize(s);
    r.normalized = true;
    z2 = r.normal->scheme;
    hz = h.rescaled_argument(r.normal->kappa_u);
  }
  r.alpha = z2.slope;

  // (2) and (4): split, regions, hypotheses.
  r.brs = wcps_to_brs(z2, hz);
  if (h.kind() == WeightKind::dome) {
    r.dome = decompose_dome(r.brs.pieces.front().weight);
  }
  if (h.kind() == WeightKind::indicator) {
    r.kesten = kesten_test(z2.window.length(), r.alpha);
  }

  // (3) admissibility of the slope.
  r.cf = cf_expand(r.alpha);
  r.gl = gl_condition(r.cf, opt.gl_terms);
  r.quotients = cf_bounded_quotients(r.cf);
  if (r.quotients.bounded) {
    r.gl_majorant = gl_majorant(r.quotients.c);
    r.gl_majorant_shifted = gl_majorant_shifted(r.quotients.c);
  }

  // (5) defect profile of the original comb against the exact density.
  r.m = density(s, h);
  QuadNum T = opt.checkpoints.empty() ? QuadNum(1000) : opt.checkpoints.front();
  for (const auto& c : opt.checkpoints) T = qmax(T, c);
  const CombMeasure comb = realize_comb(s, h, T, opt.jobs);
  r.profile = defect_profile(comb, r.m, opt.checkpoints);
  QuadNum total(0);
  for (const auto& a : comb.atoms) total += a.mass;
  r.fitted_density = total.approx() / T.approx();
  r.verdict = judge(r.profile, opt.rule);
  return r;
}

}  // namespace qcps
