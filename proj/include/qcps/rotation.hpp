// Copyright 2026 The qcps Authors
// SPDX-License-Identifier: Apache-2.0

// Discrete and continuous rotations on the unit torus.

#pragma once

#include <vector>

#include "qcps/exactnum.hpp"
#include "qcps/scheme.hpp"
#include "qcps/weights.hpp"

namespace qcps {

/// D_n(S, x) = #{0 <= k < n : x + k alpha mod 1 in S} - n |S|.
QuadNum discrete_deficiency(const Interval& S, const QuadNum& alpha, const QuadNum& x,
                            long long n);

struct KestenResult {
  bool in_lattice = false;
  /// L = m + n alpha with rational m, n (always solvable for L in the field).
  Rational m;
  Rational n;
  std::string describe() const;
};

/// Decides L in Z + alpha Z by comparing coefficients in the basis {1, sqrt d}.
KestenResult kesten_test(const QuadNum& L, const QuadNum& alpha);

struct OrbitSegment {
  QuadNum s_start;
  QuadNum s_end;
  /// Integer translate of the unit square the segment lies in.
  BigInt cell_x;
  BigInt cell_y;
  /// Position at s_start reduced to [0,1)^2.
  Vec2 entry;
};

/// Pieces of X(s) = x + s (1, alpha) on [0, t_max] between coordinate wraps.
std::vector<OrbitSegment> orbit_segments(const Vec2& x, const QuadNum& alpha,
                                         const QuadNum& t_max);

/// Delta_t(P, alpha, x) = time in P on [0, t] - t |P|, exact (polygon regions).
QuadNum delta_t(const Region& P, const QuadNum& alpha, const Vec2& x, const QuadNum& t);
/// Same at several nondecreasing times in one pass.
std::vector<QuadNum> delta_at(const Region& P, const QuadNum& alpha, const Vec2& x,
                              const std::vector<QuadNum>& times);
/// 256-bit path; the only path for curved regions.
std::vector<BigFloat> delta_at_numeric(const Region& P, const BigFloat& alpha, const BigFloat& x1,
                                       const BigFloat& x2, const std::vector<BigFloat>& times);

struct TraceRow {
  BigFloat t;
  BigFloat delta;
  BigFloat running_sup;
  long long events_since_last = 0;
};

struct DiscrepancyTrace {
  std::vector<TraceRow> rows;
  /// running sup |Delta| at each checkpoint.
  std::vector<BigFloat> checkpoint_sup;
  std::vector<BigFloat> checkpoints;
  long long events = 0;
  /// Largest |slope| seen, and whether every slope was -|P| or 1 - |P|.
  bool slopes_ok = true;
};

/// sup |Delta_s| for s up to each checkpoint, evaluated at every chord
/// entry/exit and segment boundary (Delta is affine in between). Rows are
/// emitted at the checkpoints and at `samples_per_decade` log-spaced times.
DiscrepancyTrace delta_sup_scan(const Region& P, const BigFloat& alpha, const BigFloat& x1,
                                const BigFloat& x2, const std::vector<BigFloat>& checkpoints,
                                int samples_per_decade = 10);

}  // namespace qcps
