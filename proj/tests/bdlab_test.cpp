// Copyright 2026 The qcps Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcps/bdlab.hpp"

#include <gtest/gtest.h>

#include <algorithm>

namespace qcps {
namespace {

const QuadNum kTau = QuadNum::parse("1/2+1/2*sqrt(5)");
const QuadNum kSqrt5 = QuadNum::sqrt(5);

double to_d(const BigFloat& x) { return x.convert_to<double>(); }

// sup over closed and open intervals of |w(I) - m|I||, by trying every pair
// of atom-adjacent endpoints.
QuadNum brute_interval_sup(const CombMeasure& w, const QuadNum& m) {
  std::vector<QuadNum> ends{w.lo, w.hi};
  for (const auto& a : w.atoms) ends.push_back(a.position);
  QuadNum best(0);
  for (const auto& a : ends) {
    for (const auto& b : ends) {
      if (b < a) continue;
      QuadNum closed(0), open(0);
      for (const auto& at : w.atoms) {
        if (a <= at.position && at.position <= b) closed += at.mass;
        if (a < at.position && at.position < b) open += at.mass;
      }
      best = std::max({best, (closed - m * (b - a)).abs(), (open - m * (b - a)).abs()});
    }
  }
  return best;
}

Scheme z2_scheme(const Interval& w, Vec2 z = {QuadNum::rational(1, 7), QuadNum::rational(1, 3)},
                 const QuadNum& slope = kTau) {
  return build_scheme(Mat2::identity(), std::move(z), slope, w, Axes::orthogonal);
}

Scheme fibonacci_window(const QuadNum& L) {
  const Scheme f = fibonacci_preset(FibonacciKind::full);
  return build_scheme(f.basis, f.translate, f.slope,
                      Interval{f.window.lo, f.window.lo + L, f.window.convention}, f.axes);
}

TEST(Comb, FibonacciAtoms) {
  const Scheme s = fibonacci_preset(FibonacciKind::full);
  const CombMeasure c = realize_comb(s, std::nullopt, QuadNum(6));
  ASSERT_EQ(c.atoms.size(), 5u);
  const std::vector<QuadNum> want{QuadNum(0), kTau, kTau * kTau, QuadNum(1) + QuadNum(2) * kTau,
                                  QuadNum(2) + QuadNum(2) * kTau};
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(c.atoms[i].position, want[i]);
    EXPECT_EQ(c.atoms[i].mass, QuadNum(1));
  }
  const WeightFn h = make_hat(s.window, QuadNum(0), QuadNum(1));
  const CombMeasure w = realize_comb(s, h, QuadNum(6));
  ASSERT_FALSE(w.atoms.empty());
  EXPECT_EQ(w.atoms.front().position, QuadNum(0));
  EXPECT_EQ(w.atoms.front().mass, h.value(QuadNum(0)));
  EXPECT_THROW(realize_comb(s, std::nullopt, QuadNum(0)), DomainError);
}

TEST(Comb, LatticeComb) {
  const CombMeasure c = lattice_comb(QuadNum::rational(1, 2), QuadNum::rational(1, 3), QuadNum(3));
  ASSERT_EQ(c.atoms.size(), 6u);
  EXPECT_EQ(c.atoms.front().position, QuadNum::rational(1, 3));
  EXPECT_EQ(c.atoms.back().position, QuadNum::rational(17, 6));
  EXPECT_THROW(lattice_comb(QuadNum(0), QuadNum(0), QuadNum(1)), DomainError);
}

TEST(Defect, UnitCombSawtooth) {
  const CombMeasure c = lattice_comb(QuadNum(1), QuadNum(0), QuadNum(50));
  const DefectProfile p = defect_profile(c, QuadNum(1), {QuadNum(10), QuadNum(50)});
  EXPECT_EQ(p.sup - p.inf, QuadNum(1));
  EXPECT_EQ(p.checkpoints.back().range, QuadNum(1));
  EXPECT_EQ(p.checkpoints.front().atoms, 11);
  EXPECT_EQ(defect_at(c, QuadNum(1), QuadNum::rational(5, 2)), QuadNum::rational(1, 2));
  EXPECT_THROW(defect_profile(c, QuadNum(0), {}), DomainError);
}

TEST(Defect, MatchesBruteForceOverIntervals) {
  const Scheme s = fibonacci_preset(FibonacciKind::full);
  for (const auto& h : {std::optional<WeightFn>{},
                        std::optional<WeightFn>{make_hat(s.window, QuadNum(0), QuadNum(1))}}) {
    const CombMeasure c = realize_comb(s, h, QuadNum(40));
    const QuadNum m = h ? density(s, *h) : s.density();
    const DefectProfile p = defect_profile(c, m, {});
    EXPECT_EQ(p.sup - p.inf, brute_interval_sup(c, m));
    for (std::size_t i = 0; i < c.atoms.size(); ++i) {
      EXPECT_EQ(p.after[i], defect_at(c, m, c.atoms[i].position));
      EXPECT_EQ(p.after[i] - p.before[i], c.atoms[i].mass);
    }
  }
}

TEST(Verdict, Rule) {
  DefectProfile p;
  auto cp = [](long long T, double v) { return DefectCheckpoint{QuadNum(T), 0, QuadNum(Rational(v)), {}}; };
  p.checkpoints = {cp(100, 1.0), cp(1000, 1.1), cp(100000, 1.3)};
  EXPECT_EQ(judge(p).verdict, Verdict::consistent_with_bd);
  p.checkpoints = {cp(100, 1.0), cp(1000, 1.5), cp(100000, 2.5)};
  EXPECT_EQ(judge(p).verdict, Verdict::inconsistent);
  p.checkpoints = {cp(100, 1.0), cp(1000, 1.5), cp(100000, 1.9)};
  EXPECT_EQ(judge(p).verdict, Verdict::inconclusive);
  EXPECT_EQ(to_string(Verdict::consistent_with_bd), "consistent_with_bd");
}

TEST(Compare, IdenticalLebesgue) {
  const CompareReport r = bd_compare(lebesgue(kTau), lebesgue(kTau), QuadNum(100), 1000);
  EXPECT_EQ(r.c_event, QuadNum(0));
  EXPECT_EQ(r.c_sampled, QuadNum(0));
}

TEST(Compare, PeriodicCombAgainstLebesgue) {
  const CompareReport r = bd_compare(periodic_comb(QuadNum::rational(1, 2), QuadNum(200)),
                                     lebesgue(QuadNum(2)), QuadNum(200), 10000);
  EXPECT_LE(r.c_event, QuadNum(1));
  EXPECT_TRUE(r.sampled_within_event);
  ASSERT_TRUE(r.periodic_bound.has_value());
  EXPECT_EQ(*r.periodic_bound, QuadNum(1));
  EXPECT_TRUE(r.periodic_bound_holds);
}

TEST(Compare, SampledIntervalsNeverExceedEventSup) {
  const Scheme s = fibonacci_preset(FibonacciKind::full);
  const QuadNum T(2000);
  const Measure fib = from_comb(realize_comb(s, std::nullopt, T));
  const CompareReport r = bd_compare(fib, lebesgue(s.density()), T, 10000, 7);
  EXPECT_TRUE(r.sampled_within_event);
  // Uniform endpoints land near the extremal atoms only rarely: 92% of the
  // event sup with this seed, 97% with 10^5 samples on [0, 10^5].
  EXPECT_GE(r.c_sampled.approx(), 0.9 * r.c_event.approx());
  EXPECT_EQ(r.c_event, defect_profile(realize_comb(s, std::nullopt, T), s.density(), {}).sup -
                           defect_profile(realize_comb(s, std::nullopt, T), s.density(), {}).inf);
}

TEST(Compare, FibonacciAgainstLatticeComb) {
  // Both are bounded distance to the same multiple of Lebesgue measure.
  const Scheme s = fibonacci_preset(FibonacciKind::full);
  const QuadNum spacing = kSqrt5 / kTau;
  std::vector<QuadNum> sups;
  for (long long T : {1000, 10000}) {
    const CompareReport r = bd_compare(from_comb(realize_comb(s, std::nullopt, QuadNum(T))),
                                       from_comb(lattice_comb(spacing, QuadNum(0), QuadNum(T))),
                                       QuadNum(T), 1000);
    sups.push_back(r.c_event);
  }
  EXPECT_LE(sups[1].approx(), 1.2 * sups[0].approx());
}

TEST(Pointset, TranslatedIntegers) {
  std::vector<QuadNum> a, b;
  for (int k = 0; k <= 100; ++k) {
    a.emplace_back(k);
    b.push_back(QuadNum(k) + QuadNum::rational(3, 10));
  }
  const PointsetReport r = pointset_measure_equiv_check(a, b);
  EXPECT_EQ(r.max_displacement, QuadNum::rational(3, 10));
  EXPECT_EQ(r.r, QuadNum(1));
  EXPECT_EQ(r.comb_defect, QuadNum(1));
  EXPECT_EQ(r.displacement_bound, QuadNum::rational(3, 5));
  EXPECT_FALSE(r.displacement_bound_holds);
  EXPECT_TRUE(r.corrected_bound_holds);
  EXPECT_TRUE(r.chain_ok);

  const PointsetReport same = pointset_measure_equiv_check(a, a);
  EXPECT_EQ(same.max_displacement, QuadNum(0));
  EXPECT_EQ(same.comb_defect, QuadNum(0));
  std::vector<QuadNum> dup{QuadNum(0), QuadNum(0)};
  EXPECT_THROW(pointset_measure_equiv_check(dup, dup), DomainError);
}

TEST(Pointset, FibonacciAgainstLattice) {
  const Scheme s = fibonacci_preset(FibonacciKind::full);
  const CombMeasure c = realize_comb(s, std::nullopt, QuadNum(10000));
  std::vector<QuadNum> a, b;
  const QuadNum spacing = kSqrt5 / kTau;
  for (std::size_t i = 0; i < c.atoms.size(); ++i) {
    a.push_back(c.atoms[i].position);
    b.push_back(spacing * QuadNum(static_cast<long long>(i)));
  }
  const PointsetReport r = pointset_measure_equiv_check(a, b);
  EXPECT_LT(r.max_displacement.approx(), 3.0);
  EXPECT_TRUE(r.corrected_bound_holds);
  EXPECT_TRUE(r.chain_ok);
}

TEST(Combination, LinearityAndDensity) {
  const Scheme s = fibonacci_preset(FibonacciKind::full);
  const QuadNum T(300);
  const WeightFn hat = make_hat(s.window, QuadNum(0), QuadNum(1));
  const WeightFn dome = make_c2_dome(s.window, QuadNum(1));
  const CombMeasure ch = realize_comb(s, hat, T);
  const CombMeasure cd = realize_comb(s, dome, T);
  const QuadNum m1 = density(s, hat);
  const QuadNum m2 = density(s, dome);

  const Combination id = linear_combination({{QuadNum(1), ch, m1}});
  EXPECT_EQ(id.density, m1);
  ASSERT_EQ(id.comb.atoms.size(), ch.atoms.size());
  for (std::size_t i = 0; i < ch.atoms.size(); ++i) EXPECT_EQ(id.comb.atoms[i].mass, ch.atoms[i].mass);

  const Combination twice = linear_combination({{QuadNum(2), ch, m1}});
  const DefectProfile p1 = defect_profile(ch, m1, {});
  const DefectProfile p2 = defect_profile(twice.comb, twice.density, {});
  for (std::size_t i = 0; i < p1.after.size(); ++i) {
    EXPECT_EQ(p2.after[i], QuadNum(2) * p1.after[i]);
    EXPECT_EQ(p2.before[i], QuadNum(2) * p1.before[i]);
  }

  const Combination sum = linear_combination({{QuadNum(1), ch, m1}, {QuadNum(1), cd, m2}});
  EXPECT_EQ(sum.density, m1 + m2);
  const DefectProfile pd = defect_profile(cd, m2, {});
  const DefectProfile ps = defect_profile(sum.comb, sum.density, {});
  // The two combs share their atom positions (same point set).
  ASSERT_EQ(ps.after.size(), p1.after.size());
  for (std::size_t i = 0; i < ps.after.size(); ++i) EXPECT_EQ(ps.after[i], p1.after[i] + pd.after[i]);

  EXPECT_THROW(linear_combination({{QuadNum(-1), ch, m1}}), DomainError);
  EXPECT_THROW(linear_combination({{QuadNum(1), ch, m1}, {QuadNum(1), realize_comb(s, hat, QuadNum(10)), m1}}),
               DomainError);
}

TEST(Splitting, DefectIsAdditive) {
  const Scheme s = z2_scheme(Interval{QuadNum(0), QuadNum(1)});
  const QuadNum T(100);
  const CombMeasure whole = realize_comb(s, std::nullopt, T);
  for (long long n : {2, 3}) {
    const auto subs = split_scheme(s, n);
    std::vector<CombMeasure> parts;
    QuadNum m_total(0);
    for (const auto& sub : subs) {
      parts.push_back(realize_comb(sub, std::nullopt, T));
      m_total += sub.density();
    }
    EXPECT_EQ(m_total, s.density());
    for (const auto& a : whole.atoms) {
      QuadNum acc(0);
      for (std::size_t i = 0; i < subs.size(); ++i) acc += defect_at(parts[i], subs[i].density(), a.position);
      EXPECT_EQ(acc, defect_at(whole, s.density(), a.position));
    }
  }
}

std::vector<WeightFn> five_hats() {
  const Interval w{QuadNum(0), QuadNum(1), Convention::closed};
  return {make_hat(w, QuadNum::rational(1, 2), QuadNum(1)),
          make_hat(w, QuadNum::rational(1, 3), QuadNum(2)),
          make_hat(w, QuadNum::rational(1, 4), QuadNum::rational(1, 2)),
          make_hat(w, QuadNum::rational(3, 5), QuadNum(3)),
          make_hat(w, kTau - QuadNum(1), QuadNum(1))};
}

TEST(Bridge, FiveHatsExact) {
  const Scheme s = z2_scheme(Interval{QuadNum(0), QuadNum(1), Convention::closed});
  for (const auto& h : five_hats()) {
    const BrsConstruction b = wcps_to_brs(s, h);
    ASSERT_EQ(b.split, 1);
    ASSERT_EQ(b.pieces.size(), 1u);
    EXPECT_EQ(b.pieces[0].hypotheses.status, HypothesisReport::Status::polygon_ok);
    const auto rep = bridge_identity_check(b.pieces[0], 100);
    ASSERT_EQ(rep.size(), 101u);
    EXPECT_TRUE(rep[0].comb_side.is_zero());
    EXPECT_TRUE(rep[0].line_side.is_zero());
    for (const auto& r : rep) {
      EXPECT_TRUE(r.exact);
      EXPECT_TRUE(r.difference.is_zero()) << h.describe() << " t=" << r.t;
      EXPECT_LT(to_d(mp::abs(r.difference_numeric)), 1e-15);
    }
    // The comb side is the weighted comb sum minus its mean.
    EXPECT_FALSE(rep[10].comb_side.is_zero() && rep[37].comb_side.is_zero());
  }
}

TEST(Bridge, DomeNumeric) {
  const Scheme s = z2_scheme(Interval{QuadNum(0), QuadNum::rational(1, 2), Convention::closed});
  const WeightFn h = make_c2_dome(s.window, QuadNum(1));
  const BrsConstruction b = wcps_to_brs(s, h);
  ASSERT_EQ(b.pieces.size(), 1u);
  EXPECT_EQ(b.pieces[0].region.kind, RegionKind::graph_pair);
  const auto rep = bridge_identity_check(b.pieces[0], 50);
  for (const auto& r : rep) {
    EXPECT_FALSE(r.exact);
    EXPECT_LT(to_d(mp::abs(r.difference_numeric)), 1e-15) << "t=" << r.t;
  }
}

TEST(Brs, OversizedWindowSplits) {
  const Interval w{QuadNum(0), QuadNum(2), Convention::closed};
  const Scheme s = z2_scheme(w);
  const BrsConstruction b = wcps_to_brs(s, make_hat(w, QuadNum(1), QuadNum(1)));
  EXPECT_EQ(b.split, 2);
  EXPECT_EQ(b.pieces.size(), 4u);
  for (const auto& p : b.pieces) {
    EXPECT_TRUE(p.region.inside_unit_square());
    EXPECT_EQ(p.weight.support().length(), QuadNum(1));
  }
  EXPECT_THROW(wcps_to_brs(fibonacci_preset(FibonacciKind::full), make_hat(w, QuadNum(1), QuadNum(1))),
               DomainError);
}

TEST(Brs, NormalizedFibonacciHat) {
  const Scheme s = fibonacci_preset(FibonacciKind::full);
  const QuadNormalized q = quad_normalize(s);
  const WeightFn h = make_hat(s.window, QuadNum(0), QuadNum(1)).rescaled_argument(q.kappa_u);
  const BrsConstruction b = wcps_to_brs(q.scheme, h);
  EXPECT_EQ(b.alpha, kTau);
  EXPECT_EQ(b.split, 2);
  for (const auto& p : b.pieces) {
    EXPECT_EQ(p.region.kind, RegionKind::polygon);
    EXPECT_EQ(p.hypotheses.status, HypothesisReport::Status::polygon_ok);
    for (const auto& r : bridge_identity_check(p, 20)) EXPECT_TRUE(r.difference.is_zero());
  }
}

TEST(Brs, IndicatorIsFlagged) {
  const Interval w{QuadNum(0), QuadNum::rational(1, 2)};
  const BrsConstruction b = wcps_to_brs(z2_scheme(w), WeightFn::indicator(w));
  EXPECT_NE(b.note.find("Kesten"), std::string::npos);
  EXPECT_EQ(b.pieces[0].hypotheses.status, HypothesisReport::Status::fail);
}

TEST(Pipeline, Verdicts) {
  PipelineOptions opt;
  opt.checkpoints = {QuadNum(100), QuadNum(1000), QuadNum(10000), QuadNum(100000)};
  const Scheme full = fibonacci_preset(FibonacciKind::full);
  const Scheme half = fibonacci_preset(FibonacciKind::half);

  const PipelineReport hat = main_theorem_pipeline(full, make_hat(full.window, QuadNum(0), QuadNum(1)), opt);
  EXPECT_TRUE(hat.normalized);
  EXPECT_EQ(hat.alpha, kTau);
  EXPECT_EQ(hat.m, QuadNum(1) / kSqrt5 * hat.weight.integral());
  EXPECT_EQ(hat.verdict.verdict, Verdict::consistent_with_bd);
  EXPECT_NEAR(hat.fitted_density, hat.m.approx(), 1e-3);
  EXPECT_TRUE(hat.quotients.bounded);

  const PipelineReport dome = main_theorem_pipeline(full, make_c2_dome(full.window, QuadNum(1)), opt);
  EXPECT_EQ(dome.verdict.verdict, Verdict::consistent_with_bd);
  ASSERT_TRUE(dome.dome.has_value());
  EXPECT_TRUE(dome.dome->ok);

  const PipelineReport ind = main_theorem_pipeline(half, WeightFn::indicator(half.window), opt);
  EXPECT_EQ(ind.verdict.verdict, Verdict::inconsistent);
  ASSERT_TRUE(ind.kesten.has_value());
  EXPECT_FALSE(ind.kesten->in_lattice);

  const WeightFn bad = WeightFn::piecewise_linear(
      {{full.window.lo, QuadNum(1)}, {full.window.hi, QuadNum(1)}});
  EXPECT_THROW(main_theorem_pipeline(full, bad, opt), DomainError);
}

TEST(KestenDichotomy, TwentyWindowLengths) {
  const std::vector<QuadNum> in{QuadNum(1),           kTau,
                                kTau - QuadNum(1),    QuadNum(2) - kTau,
                                QuadNum(2) * kTau - QuadNum(3), QuadNum(3) - kTau,
                                QuadNum(2) * kTau - QuadNum(2), QuadNum(2)};
  const std::vector<QuadNum> out{
      QuadNum::rational(1, 2), kTau / QuadNum(2),       QuadNum::rational(1, 3), QuadNum::rational(2, 3),
      QuadNum::rational(3, 2), QuadNum::rational(1, 4), QuadNum::rational(3, 4), QuadNum::rational(1, 5),
      QuadNum::rational(4, 5), QuadNum::rational(6, 5), QuadNum::rational(7, 5), QuadNum::rational(2, 7)};
  const std::vector<QuadNum> cps{QuadNum(100), QuadNum(1000), QuadNum(10000), QuadNum(100000)};
  auto profile = [&](const QuadNum& L) {
    const Scheme s = fibonacci_window(L);
    return defect_profile(realize_comb(s, std::nullopt, cps.back()), s.density(), cps);
  };
  for (const auto& L : in) {
    EXPECT_TRUE(kesten_test(L, kTau).in_lattice);
    EXPECT_TRUE(judge(profile(L)).plateau) << L;
  }
  // Growth of max|F| is logarithmic in T; over three decades it stays
  // below +1 for some lengths outside Z + tau Z.
  std::vector<QuadNum> slow;
  for (const auto& L : out) {
    EXPECT_FALSE(kesten_test(L, kTau).in_lattice);
    const VerdictReport v = judge(profile(L));
    EXPECT_GT(v.growth_amount, 0.5) << L;
    if (!v.growth) slow.push_back(L);
  }
  const std::vector<QuadNum> measured{QuadNum::rational(2, 3), QuadNum::rational(3, 4),
                                      QuadNum::rational(1, 5), QuadNum::rational(4, 5),
                                      QuadNum::rational(6, 5)};
  EXPECT_EQ(slow, measured);
}

}  // namespace
}  // namespace qcps
