// Operators on tilings: partner sets, amalgamation-and-shrinking (alpha) and
// its inverse, the shift maps S_i, and bounded searches for rigidity and
// tiling symmetries.
//
//   alpha:     every partner set E T_0 becomes the tile s E A; every other
//              tile t becomes s t.
//   alpha^-1:  every large tile t (isometric to sA) splits into s^-1 t f_i;
//              every other tile t becomes s^-1 t.
//   S_i       = f_i s^{-a_i} alpha^{a_i},   S_i pi(i theta) = pi(theta).
//
// Rigidity verdicts are always relative to the candidate isometries the
// search generates; "rigid" means no counterexample was found.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "blowup/tiling.hpp"

namespace blowup {

struct PartnerSet {
  Similitude isometry;               // E, power 0
  std::vector<std::size_t> members;  // members[i-1] is the tile E f_i A
};

struct PartnerReport {
  std::vector<PartnerSet> sets;
  std::vector<std::size_t> unmatched_small;  // small tiles with no partner set
};

// Throws NotInDomain when a small tile lies in two different partner sets or
// two partner sets share a tile.
PartnerReport detect_partners(const Tiling& t);

// Throws NotInDomain unless every small tile has a partner set.
Tiling amalgamate(const Tiling& t);
Tiling amalgamate_inverse(const Tiling& t);

// T must be a prefix tiling pi(theta) with theta_1 = i and e(theta) >= a_i.
// The result is cross-checked against pi(S theta); a mismatch throws
// InconsistencyError.
Tiling shift(int i, const Tiling& t);
// alpha^{-a_i} s^{a_i} f_i^{-1}, taking pi(theta) to pi(i theta).
Tiling shift_inverse(int i, const Tiling& t);

struct RigidityBounds {
  std::size_t max_candidates = 200000;
  double rel_tol = kMatchTol;  // common-area versus clip-area agreement
};

struct RigidityReport {
  enum class Verdict { Rigid, NotRigid, Inconclusive };
  Verdict verdict = Verdict::Inconclusive;
  std::optional<Similitude> witness;
  std::vector<Tile> common;  // tiles of the witnessing common sub-tiling
  std::string condition;     // which clause failed, or why inconclusive
  int level_i = 0;           // strong check: the pair (T_i, E T_j)
  int level_j = 0;
  std::size_t candidates = 0;
  RigidityBounds bounds;
};

const char* verdict_name(RigidityReport::Verdict v);

// (i) no non-identity E with T_0 n E T_0 a nonempty tiling of A n EA, and
// (ii) no non-identity isometry E with EA = A.
RigidityReport rigidity_check(const IfsPtr& ifs, const RigidityBounds& bounds = {});

// For 0 <= i, j < a_max: whenever T_i n E T_j tiles A_i n E A_j, one of T_i,
// E T_j contains the other. Runs rigidity_check first.
RigidityReport strong_rigidity_check(const IfsPtr& ifs, const RigidityBounds& bounds = {});

// Candidate isometries that map a tile of `a` onto a same-power tile of `b`:
// E = u o g o t^{-1} for t in a, u in b, g a self-map of A.
std::vector<Similitude> candidate_isometries(const Tiling& a, const Tiling& b, bool include_identity = false);

struct SymmetryBounds {
  double core_fraction = 0.5;  // core ball radius as a fraction of half the support diameter
  double min_landed = 0.5;     // fraction of core tiles whose image must land inside T
  std::size_t max_candidates = 500000;
};

// Non-identity isometries E that map a tile near the centre of T onto a tile
// and survive two tests: every tile whose image has its anchor inside the
// support of T maps onto a tile of T, and at least min_landed of the core
// tiles (anchors within the core ball) map onto tiles.
std::vector<Similitude> symmetry_search(const Tiling& t, const SymmetryBounds& bounds = {});

}  // namespace blowup
