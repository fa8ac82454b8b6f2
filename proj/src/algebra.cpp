#include "blowup/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "blowup/errors.hpp"

namespace blowup {

namespace {

// Members of a partner set share .w and differ in the last letter; the
// amalgamated tile is then .w. Anything else loses its address.
std::optional<AbsoluteAddress> merged_address(const Tiling& t, const PartnerSet& set) {
  std::optional<Word> stem;
  for (std::size_t i = 0; i < set.members.size(); ++i) {
    const auto& a = t[set.members[i]].address;
    if (!a || !a->theta.empty() || a->omega.size() < 2) return std::nullopt;
    if (a->omega.back() != static_cast<int>(i + 1)) return std::nullopt;
    Word w = a->omega.without_last();
    if (stem && !(*stem == w)) return std::nullopt;
    stem = w;
  }
  if (!stem) return std::nullopt;
  return AbsoluteAddress{Word{}, *stem};
}

std::optional<AbsoluteAddress> relative_only(const std::optional<AbsoluteAddress>& a) {
  if (a && a->theta.empty()) return a;
  return std::nullopt;
}

Provenance stepped(const Tiling& t, int delta, const char* op) {
  const Provenance& p = t.provenance();
  if (p.kind == Provenance::Kind::Canonical && p.level + delta >= 0) return Provenance::canonical(p.level + delta);
  return Provenance::derived(std::string(op) + "(" + p.str() + ")");
}

// Rounded transform parameters; used only to drop repeated candidates.
std::vector<long long> fingerprint(const Similitude& e) {
  std::vector<long long> key{e.power()};
  for (int r = 0; r < e.dim(); ++r) {
    key.push_back(std::llround(e.trans()(r) * 1e6));
    for (int c = 0; c < e.dim(); ++c) key.push_back(std::llround(e.ortho()(r, c) * 1e6));
  }
  return key;
}

Tiling copy_addresses(const Tiling& computed, const Tiling& direct) {
  TileIndex idx(direct);
  std::vector<Tile> tiles = computed.tiles();
  for (Tile& tile : tiles) {
    auto hit = idx.find(tile.transform);
    if (hit) tile.address = direct[*hit].address;
  }
  return Tiling(direct.ifs_ptr(), std::move(tiles), direct.provenance());
}

}  // namespace

PartnerReport detect_partners(const Tiling& t) {
  const Ifs& ifs = t.ifs();
  const PowerVector& pv = ifs.pv();
  const int amax = pv.a_max();
  TileIndex idx(t);
  PartnerReport rep;
  std::vector<int> owner(t.size(), -1);
  for (std::size_t s = 0; s < t.size(); ++s) {
    if (t[s].transform.power() != amax) continue;
    std::vector<PartnerSet> found;
    for (int j = 1; j <= pv.size(); ++j) {
      if (pv[j] != amax) continue;
      const Similitude fj_inv = ifs.map(j).inverse();
      for (const Similitude& g : ifs.symmetries()) {
        Similitude e = t[s].transform.compose(g).compose(fj_inv);
        PartnerSet set{e, {}};
        for (int i = 1; i <= pv.size(); ++i) {
          auto hit = idx.find(e.compose(ifs.map(i)));
          if (!hit) break;
          set.members.push_back(*hit);
        }
        if (static_cast<int>(set.members.size()) != pv.size()) continue;
        std::vector<std::size_t> sorted = set.members;
        std::sort(sorted.begin(), sorted.end());
        bool dup = std::any_of(found.begin(), found.end(), [&](const PartnerSet& f) {
          std::vector<std::size_t> o = f.members;
          std::sort(o.begin(), o.end());
          return o == sorted;
        });
        if (!dup) found.push_back(std::move(set));
      }
    }
    if (found.empty()) {
      rep.unmatched_small.push_back(s);
      continue;
    }
    if (found.size() > 1)
      throw NotInDomain("small tile " + std::to_string(s) + " lies in " + std::to_string(found.size()) + " partner sets");
    PartnerSet& set = found.front();
    const int existing = owner[set.members.front()];
    if (existing >= 0) {
      std::vector<std::size_t> a = rep.sets[static_cast<std::size_t>(existing)].members, b = set.members;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (a == b) continue;
    }
    for (std::size_t m : set.members)
      if (owner[m] >= 0) throw NotInDomain("partner sets share tile " + std::to_string(m));
    for (std::size_t m : set.members) owner[m] = static_cast<int>(rep.sets.size());
    rep.sets.push_back(std::move(set));
  }
  return rep;
}

Tiling amalgamate(const Tiling& t) {
  PartnerReport rep = detect_partners(t);
  if (!rep.unmatched_small.empty())
    throw NotInDomain(std::to_string(rep.unmatched_small.size()) + " small tile(s) without a partner set");
  const Ifs& ifs = t.ifs();
  const Similitude shrink = ifs.scaling(1);
  std::vector<int> owner(t.size(), -1);
  for (std::size_t k = 0; k < rep.sets.size(); ++k)
    for (std::size_t m : rep.sets[k].members) owner[m] = static_cast<int>(k);
  std::vector<bool> emitted(rep.sets.size(), false);
  std::vector<Tile> out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (owner[i] < 0) {
      Similitude tr = shrink.compose(t[i].transform);
      int p = tr.power();
      out.push_back(Tile{relative_only(t[i].address), std::move(tr), p});
      continue;
    }
    const auto k = static_cast<std::size_t>(owner[i]);
    if (emitted[k]) continue;
    emitted[k] = true;
    Similitude tr = shrink.compose(rep.sets[k].isometry);
    int p = tr.power();
    out.push_back(Tile{merged_address(t, rep.sets[k]), std::move(tr), p});
  }
  return Tiling(t.ifs_ptr(), std::move(out), stepped(t, -1, "alpha"));
}

Tiling amalgamate_inverse(const Tiling& t) {
  const Ifs& ifs = t.ifs();
  const Similitude grow = ifs.scaling(-1);
  std::vector<Tile> out;
  for (const Tile& tile : t.tiles()) {
    Similitude base = grow.compose(tile.transform);
    if (tile.transform.power() != 1) {
      int p = base.power();
      out.push_back(Tile{relative_only(tile.address), std::move(base), p});
      continue;
    }
    for (int i = 1; i <= ifs.n(); ++i) {
      Similitude tr = base.compose(ifs.map(i));
      std::optional<AbsoluteAddress> addr;
      if (auto a = relative_only(tile.address)) addr = AbsoluteAddress{Word{}, a->omega.with(i)};
      int p = tr.power();
      out.push_back(Tile{std::move(addr), std::move(tr), p});
    }
  }
  return Tiling(t.ifs_ptr(), std::move(out), stepped(t, 1, "alpha^-1"));
}

Tiling shift(int i, const Tiling& t) {
  const Provenance& prov = t.provenance();
  if (prov.kind != Provenance::Kind::Prefix || prov.theta.empty())
    throw PreconditionError("shift needs a prefix tiling pi(theta) with theta nonempty");
  if (prov.theta.front() != i)
    throw PreconditionError("shift(" + std::to_string(i) + ") applied to pi(" + prov.theta.str() + ")");
  const IfsPtr& ifs = t.ifs_ptr();
  const int a = ifs->pv()[i];
  if (prov.level < a) throw PreconditionError("shift needs e(theta) >= a_i");
  // pi(theta) is the disjoint union of pi(empty) and the annuli
  // pi(theta|k) minus pi(theta|k-1); alpha acts on each piece the same way.
  if (!nesting_check(prov.theta, ifs).ok) throw InconsistencyError("prefix chain of pi(" + prov.theta.str() + ") is not nested");
  Tiling cur = t;
  for (int r = 0; r < a; ++r) cur = amalgamate(cur);
  Tiling img = transformed(ifs->map(i).compose(ifs->scaling(-a)), cur);
  Tiling direct = pi_prefix(prov.theta.suffix_from(1), ifs);
  if (!same_tiles(img, direct)) throw InconsistencyError("shift of pi(" + prov.theta.str() + ") disagrees with the direct construction");
  return copy_addresses(img, direct);
}

Tiling shift_inverse(int i, const Tiling& t) {
  const Provenance& prov = t.provenance();
  if (prov.kind != Provenance::Kind::Prefix) throw PreconditionError("inverse shift needs a prefix tiling pi(theta)");
  const IfsPtr& ifs = t.ifs_ptr();
  validate_word(Word{i}, ifs->pv());
  const int a = ifs->pv()[i];
  Tiling cur = transformed(ifs->scaling(a).compose(ifs->map(i).inverse()), t);
  for (int r = 0; r < a; ++r) cur = amalgamate_inverse(cur);
  Tiling direct = pi_prefix(prov.theta.prepended(i), ifs);
  if (!same_tiles(cur, direct))
    throw InconsistencyError("inverse shift of pi(" + prov.theta.str() + ") disagrees with the direct construction");
  return copy_addresses(cur, direct);
}

const char* verdict_name(RigidityReport::Verdict v) {
  switch (v) {
    case RigidityReport::Verdict::Rigid:
      return "rigid";
    case RigidityReport::Verdict::NotRigid:
      return "not_rigid";
    case RigidityReport::Verdict::Inconclusive:
      break;
  }
  return "inconclusive";
}

std::vector<Similitude> candidate_isometries(const Tiling& a, const Tiling& b, bool include_identity) {
  const Ifs& ifs = a.ifs();
  std::map<std::vector<long long>, std::size_t> seen;
  std::vector<Similitude> out;
  for (const Tile& t : a.tiles()) {
    const Similitude t_inv = t.transform.inverse();
    for (const Tile& u : b.tiles()) {
      if (u.transform.power() != t.transform.power()) continue;
      for (const Similitude& g : ifs.symmetries()) {
        Similitude e = u.transform.compose(g).compose(t_inv);
        if (!include_identity && e.is_identity(kMatchTol)) continue;
        if (seen.emplace(fingerprint(e), out.size()).second) out.push_back(std::move(e));
      }
    }
  }
  return out;
}

RigidityReport rigidity_check(const IfsPtr& ifs, const RigidityBounds& bounds) {
  RigidityReport rep;
  rep.bounds = bounds;
  if (!ifs->polygon_mode()) {
    rep.condition = "point-cloud attractor: tiling areas are not available";
    return rep;
  }
  Tiling t0 = canonical_tiling(0, ifs);
  for (const Similitude& g : ifs->symmetries()) {
    if (g.is_identity(kMatchTol)) continue;
    rep.verdict = RigidityReport::Verdict::NotRigid;
    rep.condition = "(ii) a non-identity isometry maps A onto itself";
    rep.witness = g;
    Tiling img = transformed(g, t0);
    for (std::size_t i : common_tiles(t0, img)) rep.common.push_back(t0[i]);
    return rep;
  }
  for (const Similitude& e : candidate_isometries(t0, t0)) {
    if (++rep.candidates > bounds.max_candidates) {
      rep.condition = "candidate bound reached";
      return rep;
    }
    Tiling img = transformed(e, t0);
    CommonTilingReport c = common_tiling(t0, img, bounds.rel_tol);
    if (!c.tiles_intersection) continue;
    rep.verdict = RigidityReport::Verdict::NotRigid;
    rep.condition = "(i) T_0 n E T_0 tiles A n EA for a non-identity E";
    rep.witness = e;
    for (std::size_t i : common_tiles(t0, img)) rep.common.push_back(t0[i]);
    return rep;
  }
  rep.verdict = RigidityReport::Verdict::Rigid;
  rep.condition = "no counterexample among generated candidates";
  return rep;
}

RigidityReport strong_rigidity_check(const IfsPtr& ifs, const RigidityBounds& bounds) {
  RigidityReport rep = rigidity_check(ifs, bounds);
  if (rep.verdict != RigidityReport::Verdict::Rigid) return rep;
  const int amax = ifs->a_max();
  std::vector<Tiling> levels;
  for (int k = 0; k < amax; ++k) levels.push_back(canonical_tiling(k, ifs));
  for (int i = 0; i < amax; ++i) {
    for (int j = 0; j < amax; ++j) {
      for (const Similitude& e : candidate_isometries(levels[j], levels[i], i != j)) {
        if (++rep.candidates > bounds.max_candidates) {
          rep.verdict = RigidityReport::Verdict::Inconclusive;
          rep.condition = "candidate bound reached";
          return rep;
        }
        Tiling img = transformed(e, levels[j]);
        CommonTilingReport c = common_tiling(levels[i], img, bounds.rel_tol);
        if (!c.tiles_intersection) continue;
        if (tiles_subset(levels[i], img) || tiles_subset(img, levels[i])) continue;
        rep.verdict = RigidityReport::Verdict::NotRigid;
        rep.condition = "T_i n E T_j tiles the support intersection but neither contains the other";
        rep.witness = e;
        rep.level_i = i;
        rep.level_j = j;
        for (std::size_t k : common_tiles(levels[i], img)) rep.common.push_back(levels[i][k]);
        return rep;
      }
    }
  }
  rep.condition = "no counterexample within bounds";
  return rep;
}

std::vector<Similitude> symmetry_search(const Tiling& t, const SymmetryBounds& bounds) {
  std::vector<Similitude> out;
  if (t.size() < 2) return out;
  const Ifs& ifs = t.ifs();
  if (!ifs.polygon_mode()) throw PreconditionError("symmetry search needs polygon geometry");

  std::vector<Vec2> anchors;
  BBox box;
  for (std::size_t i = 0; i < t.size(); ++i) {
    Vec a = tile_anchor(ifs, t[i].transform);
    anchors.emplace_back(a(0), a(1));
    if (i == 0)
      box = BBox{anchors[0], anchors[0]};
    else
      box.expand(anchors.back());
  }
  const Vec2 center = 0.5 * (box.lo + box.hi);
  std::size_t t0 = 0;
  for (std::size_t i = 1; i < t.size(); ++i)
    if ((anchors[i] - center).norm() < (anchors[t0] - center).norm()) t0 = i;
  const double radius = bounds.core_fraction * 0.5 * support_diameter(t);
  std::vector<bool> in_core(t.size(), false);
  std::size_t core_size = 0;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (i == t0 || (anchors[i] - center).norm() <= radius) in_core[i] = true, ++core_size;
  // Every tile is evaluated, nearest to t0 first so refutations come early.
  std::vector<std::size_t> order(t.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return (anchors[x] - anchors[t0]).norm() < (anchors[y] - anchors[t0]).norm();
  });

  TileIndex idx(t);
  PointLocator loc(t);
  const double tol = 1e-9 * std::max(1.0, support_diameter(t));
  const Similitude t0_inv = t[t0].transform.inverse();
  std::map<std::vector<long long>, bool> seen;
  std::size_t candidates = 0;
  for (std::size_t u = 0; u < t.size(); ++u) {
    if (t[u].transform.power() != t[t0].transform.power()) continue;
    for (const Similitude& g : ifs.symmetries()) {
      Similitude e = t[u].transform.compose(g).compose(t0_inv);
      if (e.is_identity(kMatchTol)) continue;
      if (++candidates > bounds.max_candidates) return out;
      std::size_t landed = 0;
      bool ok = true;
      for (std::size_t c : order) {
        if (idx.contains(e.compose(t[c].transform))) {
          if (in_core[c]) ++landed;
          continue;
        }
        // The image falls inside the truncation but is not one of its tiles.
        if (loc.locate(e.apply2(anchors[c]), tol)) {
          ok = false;
          break;
        }
      }
      if (!ok || static_cast<double>(landed) < bounds.min_landed * static_cast<double>(core_size)) continue;
      if (seen.emplace(fingerprint(e), true).second) out.push_back(std::move(e));
    }
  }
  return out;
}

}  // namespace blowup
