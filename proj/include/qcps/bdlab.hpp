// Copyright 2026 The qcps Authors
// SPDX-License-Identifier: Apache-2.0

// Bounded distance analysis of Dirac combs against multiples of Lebesgue
// measure, and the bridge between weighted model sets and rotations.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcps/cfrac.hpp"
#include "qcps/exactnum.hpp"
#include "qcps/rotation.hpp"
#include "qcps/scheme.hpp"
#include "qcps/weights.hpp"

namespace qcps {

struct Atom {
  QuadNum position;
  QuadNum mass;
};

struct CombMeasure {
  /// Sorted by position, positions distinct.
  std::vector<Atom> atoms;
  QuadNum lo;
  QuadNum hi;
};

/// Atoms of sum_{x in Lambda} h(x*) delta_x on [0, T]; mass 1 without a weight.
CombMeasure realize_comb(const Scheme& s, const std::optional<WeightFn>& h, const QuadNum& T,
                         int jobs = 1);

/// Comb of `spacing` Z + offset on [0, T].
CombMeasure lattice_comb(const QuadNum& spacing, const QuadNum& offset, const QuadNum& T);

/// Positive combination; atoms at equal positions are merged.
struct Combination {
  CombMeasure comb;
  QuadNum density;
};
Combination linear_combination(const std::vector<std::tuple<QuadNum, CombMeasure, QuadNum>>& terms);

struct DefectCheckpoint {
  QuadNum T;
  long long atoms = 0;
  /// max |F| on [0, T], with F taken on both sides of every atom.
  QuadNum max_abs;
  /// sup F - inf F on [0, T].
  QuadNum range;
};

struct DefectProfile {
  QuadNum m;
  /// F just before and just after each atom.
  std::vector<QuadNum> before;
  std::vector<QuadNum> after;
  QuadNum sup;
  QuadNum inf;
  std::vector<DefectCheckpoint> checkpoints;
};

/// F(t) = omega([0, t]) - m t with F(0^-) = 0.
DefectProfile defect_profile(const CombMeasure& w, const QuadNum& m,
                             const std::vector<QuadNum>& checkpoints);
/// F(t) right-continuous, exact.
QuadNum defect_at(const CombMeasure& w, const QuadNum& m, const QuadNum& t);

/// Fast order test on exact values (double pre-check, exact tie-break).
bool quick_less(const QuadNum& a, const QuadNum& b);

enum class Verdict { consistent_with_bd, inconsistent, inconclusive };
std::string to_string(Verdict v);

struct VerdictRule {
  /// Plateau: every checkpoint T >= t0 has max|F|(T) <= ratio * max|F|(t0).
  QuadNum t0{1000};
  double ratio = 1.2;
  /// Growth: max|F| at the last checkpoint >= max|F| at the first + growth.
  double growth = 1.0;
};

struct VerdictReport {
  Verdict verdict = Verdict::inconclusive;
  bool plateau = false;
  bool growth = false;
  double plateau_ratio = 0;
  double growth_amount = 0;
};

VerdictReport judge(const DefectProfile& p, const VerdictRule& rule = {});

// ----------------------------------------------------------------------

/// Atoms plus an absolutely continuous part with constant density.
struct Measure {
  std::vector<Atom> atoms;
  QuadNum density;
  /// Set for periodic measures.
  std::optional<QuadNum> period;
  std::string label;
};

Measure lebesgue(const QuadNum& m);
Measure from_comb(const CombMeasure& c, std::string label = "comb");
Measure periodic_comb(const QuadNum& spacing, const QuadNum& T, std::string label = "lattice comb");

struct CompareReport {
  /// sup over event-delimited intervals of |mu([a,b]) - nu([a,b])|.
  QuadNum c_event;
  /// Largest value over the random intervals.
  QuadNum c_sampled;
  long long samples = 0;
  bool sampled_within_event = true;
  /// mass * period of the periodic side, when there is one.
  std::optional<QuadNum> periodic_bound;
  bool periodic_bound_holds = true;
};

CompareReport bd_compare(const Measure& mu, const Measure& nu, const QuadNum& T,
                         long long interval_samples, unsigned long long seed = 0);

struct PointsetReport {
  QuadNum max_displacement;
  /// Smallest gap inside either set.
  QuadNum r;
  /// sup over intervals of |#Lambda cap I - #Lambda' cap I|.
  QuadNum comb_defect;
  QuadNum displacement_bound;  // 2 C' / r
  QuadNum corrected_bound;     // 2 (C' / r + 1)
  bool displacement_bound_holds = false;
  bool corrected_bound_holds = false;
  /// Points of Lambda' strictly between x_i and x'_i never exceed |x_i - x'_i|/r + 1.
  bool chain_ok = true;
  long long pairs = 0;
};

PointsetReport pointset_measure_equiv_check(const std::vector<QuadNum>& a,
                                            const std::vector<QuadNum>& b);

// ----------------------------------------------------------------------
// Weighted model sets over Z^2 and bounded remainder sets.

struct BrsPiece {
  /// Sub-scheme rescaled to Z^2 (translate ((k,l) + z)/n, window W/n).
  Scheme scheme;
  WeightFn weight;
  Region region;
  RegionPlacement placement;
  /// Start point (0, y0) of the rotation.
  Vec2 start;
  HypothesisReport hypotheses;
};

struct BrsConstruction {
  long long split = 1;
  QuadNum alpha;
  std::vector<BrsPiece> pieces;
  std::string note;
};

/// Requires a Z^2 basis. Splits with the least n that makes every piece fit.
BrsConstruction wcps_to_brs(const Scheme& s, const WeightFn& h);

struct BridgeReport {
  long long t = 0;
  /// c' (sum h(u) over lattice points with 0 <= y1 - z1 < t) - t c' integral(h).
  QuadNum comb_side;
  QuadNum line_side;
  QuadNum difference;
  bool exact = false;
  BigFloat comb_side_numeric;
  BigFloat line_side_numeric;
  BigFloat difference_numeric;
};

/// Both sides of the bridge identity at integer times 0..t_max, computed
/// independently (lattice sum vs. orbit clipping).
std::vector<BridgeReport> bridge_identity_check(const BrsPiece& piece, long long t_max,
                                                bool numeric_only = false);

struct PipelineOptions {
  std::vector<QuadNum> checkpoints{QuadNum(100), QuadNum(1000), QuadNum(10000)};
  VerdictRule rule;
  int jobs = 1;
  long long gl_terms = 200;
};

struct PipelineReport {
  Scheme scheme;
  WeightFn weight;
  bool normalized = false;
  std::optional<QuadNormalized> normal;
  QuadNum alpha;
  CFExpansion cf;
  GlSums gl;
  BigFloat gl_majorant;
  BigFloat gl_majorant_shifted;
  QuotientBound quotients;
  BrsConstruction brs;
  std::optional<DomeDecomposition> dome;
  std::optional<KestenResult> kesten;
  QuadNum m;
  double fitted_density = 0;
  DefectProfile profile;
  VerdictReport verdict;
};

PipelineReport main_theorem_pipeline(const Scheme& s, const WeightFn& h,
                                     const PipelineOptions& opt = {});

}  // namespace qcps
