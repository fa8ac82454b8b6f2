#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "blowup/algebra.hpp"
#include "blowup/errors.hpp"
#include "blowup/io.hpp"
#include "oracles.hpp"

using namespace blowup;

namespace {

IfsPtr golden() {
  static IfsPtr g = Ifs::build(preset("goldenb"));
  return g;
}

std::set<std::string> address_strings(const Tiling& t) {
  std::set<std::string> out;
  for (const Tile& tile : t.tiles()) out.insert(tile.address ? tile.address->str() : "?");
  return out;
}

std::set<std::string> member_addresses(const Tiling& t, const PartnerSet& p) {
  std::set<std::string> out;
  for (std::size_t i : p.members) out.insert(t[i].address->str());
  return out;
}

std::vector<Similitude> oracle_level(int k, const Ifs& ifs) {
  std::vector<Similitude> out;
  for (auto& [w, tr] : oracle::split_tiling(k, ifs)) out.push_back(tr);
  return out;
}

Word random_word(std::mt19937& rng, int len) {
  std::vector<Letter> l;
  for (int i = 0; i < len; ++i) l.push_back(static_cast<Letter>(1 + rng() % 2));
  return Word(l);
}

}  // namespace

TEST_CASE("partner detection") {
  IfsPtr ifs = golden();
  Tiling t0 = canonical_tiling(0, ifs);
  PartnerReport r0 = detect_partners(t0);
  REQUIRE(r0.sets.size() == 1);
  CHECK(r0.sets[0].isometry.is_identity(1e-9));
  CHECK(r0.unmatched_small.empty());

  Tiling t1 = canonical_tiling(1, ifs);
  PartnerReport r1 = detect_partners(t1);
  REQUIRE(r1.sets.size() == 1);
  CHECK(member_addresses(t1, r1.sets[0]) == std::set<std::string>{".11", ".12"});
  CHECK(r1.unmatched_small.empty());

  Tiling t2 = canonical_tiling(2, ifs);
  PartnerReport r2 = detect_partners(t2);
  REQUIRE(r2.sets.size() == 2);
  std::set<std::set<std::string>> groups;
  for (const PartnerSet& p : r2.sets) groups.insert(member_addresses(t2, p));
  CHECK(groups == std::set<std::set<std::string>>{{".21", ".22"}, {".111", ".112"}});
  // the tile left over is the large tile .12
  std::set<std::size_t> covered;
  for (const PartnerSet& p : r2.sets) covered.insert(p.members.begin(), p.members.end());
  for (std::size_t i = 0; i < t2.size(); ++i)
    if (!covered.count(i)) {
      CHECK(t2[i].address->str() == ".12");
      CHECK(t2[i].proto_index == 1);
    }

  // members are E f_i A
  for (int k = 0; k <= 7; ++k) {
    Tiling t = canonical_tiling(k, ifs);
    for (const PartnerSet& p : detect_partners(t).sets) {
      CHECK(p.isometry.is_isometry());
      for (int i = 1; i <= ifs->n(); ++i)
        CHECK(same_tile(*ifs, t[p.members[i - 1]].transform, compose(p.isometry, ifs->map(i))));
    }
  }
}

TEST_CASE("amalgamation on canonical tilings") {
  IfsPtr ifs = golden();
  Tiling t1 = canonical_tiling(1, ifs);
  Tiling a1 = amalgamate(t1);
  CHECK(same_tiles(a1, canonical_tiling(0, ifs)));
  CHECK(address_strings(a1) == std::set<std::string>{".1", ".2"});

  Tiling a5 = amalgamate(canonical_tiling(5, ifs));
  CHECK(address_strings(a5) == address_strings(canonical_tiling(4, ifs)));
  CHECK(oracle::same_polygons(*ifs, oracle::transforms(a5), oracle_level(4, *ifs)));

  Tiling single = amalgamate(canonical_tiling(0, ifs));
  REQUIRE(single.size() == 1);
  CHECK(single[0].transform.approx_equal(ifs->scaling(1), 1e-9));

  Tiling back = amalgamate_inverse(single);
  CHECK(same_tiles(back, canonical_tiling(0, ifs)));
  CHECK(same_tiles(amalgamate_inverse(canonical_tiling(0, ifs)), t1));

  for (int k = 1; k <= 8; ++k) {
    CAPTURE(k);
    Tiling tk = canonical_tiling(k, ifs);
    CHECK(oracle::same_polygons(*ifs, oracle::transforms(amalgamate(tk)), oracle_level(k - 1, *ifs)));
    CHECK(oracle::same_polygons(*ifs, oracle::transforms(amalgamate_inverse(canonical_tiling(k - 1, ifs))),
                                oracle_level(k, *ifs)));
    CHECK(same_tiles(amalgamate_inverse(amalgamate(tk)), tk));
    CHECK(address_strings(amalgamate_inverse(canonical_tiling(k - 1, ifs))) == address_strings(tk));
  }
}

TEST_CASE("amalgamation outside its domain") {
  IfsPtr ifs = golden();
  Tiling small(ifs, {Tile{std::nullopt, ifs->scaling(2), 2}}, Provenance::derived("lonely small tile"));
  CHECK_THROWS_AS(amalgamate(small), NotInDomain);
  PartnerReport r = detect_partners(small);
  CHECK(r.sets.empty());
  CHECK(r.unmatched_small.size() == 1);
}

TEST_CASE("round trips on prefix tilings") {
  IfsPtr ifs = golden();
  std::mt19937 rng(17);
  for (int trial = 0; trial < 12; ++trial) {
    Word theta = random_word(rng, 1 + trial % 6);
    CAPTURE(theta.str());
    Tiling p = pi_prefix(theta, ifs);
    CHECK(same_tiles(amalgamate_inverse(amalgamate(p)), p));
    CHECK(same_tiles(amalgamate(amalgamate_inverse(p)), p));
  }
}

TEST_CASE("shift maps") {
  IfsPtr ifs = golden();
  CHECK(same_tiles(shift(1, pi_prefix(Word{1, 2}, ifs)), pi_prefix(Word{2}, ifs)));
  CHECK(same_tiles(shift(2, pi_prefix(Word{2, 1}, ifs)), pi_prefix(Word{1}, ifs)));
  CHECK(same_tiles(shift_inverse(1, pi_prefix(Word{2}, ifs)), pi_prefix(Word{1, 2}, ifs)));
  CHECK(same_tiles(shift_inverse(2, pi_prefix(Word{1}, ifs)), pi_prefix(Word{2, 1}, ifs)));

  Tiling s = shift(1, pi_prefix(Word{1, 2, 2, 1}, ifs));
  CHECK(s.provenance().kind == Provenance::Kind::Prefix);
  CHECK(s.provenance().theta == Word{2, 2, 1});
  CHECK(oracle::same_polygons(*ifs, oracle::transforms(s), oracle::direct_pi({2, 2, 1}, *ifs)));

  CHECK_THROWS_AS(shift(2, pi_prefix(Word{1, 2}, ifs)), PreconditionError);
  CHECK_THROWS_AS(shift(1, canonical_tiling(3, ifs)), PreconditionError);
}

TEST_CASE("rigidity") {
  IfsPtr ifs = golden();
  RigidityReport r = rigidity_check(ifs);
  CHECK(r.verdict == RigidityReport::Verdict::Rigid);
  CHECK_FALSE(r.witness);
  CHECK(std::string(verdict_name(r.verdict)) == "rigid");
  RigidityReport strong = strong_rigidity_check(ifs);
  CHECK(strong.verdict == RigidityReport::Verdict::Rigid);

  IfsPtr sq = Ifs::build(preset("square4"));
  RigidityReport rs = rigidity_check(sq);
  CHECK(rs.verdict == RigidityReport::Verdict::NotRigid);
  CHECK(std::string(verdict_name(rs.verdict)) == "not_rigid");
  REQUIRE(rs.witness);
  CHECK_FALSE(rs.witness->is_identity(1e-6));
  CHECK(rs.condition.rfind("(ii)", 0) == 0);
  CHECK(oracle::same_vertex_set(oracle::vertex_set(*sq, *rs.witness), oracle::vertex_set(*sq, sq->identity()), 1e-9));
  CHECK_FALSE(rs.common.empty());
  // the strong check stops at the same gate
  CHECK(strong_rigidity_check(sq).condition == rs.condition);

  IfsPtr cantor = Ifs::build(preset("cantor"));
  CHECK(rigidity_check(cantor).verdict == RigidityReport::Verdict::Inconclusive);
  CHECK(std::string(verdict_name(RigidityReport::Verdict::Inconclusive)) == "inconclusive");

  RigidityBounds tiny;
  tiny.max_candidates = 0;
  IfsSpec spec = preset("goldenb");
  CHECK(strong_rigidity_check(Ifs::build(spec), tiny).verdict == RigidityReport::Verdict::Inconclusive);
}

TEST_CASE("candidate isometries map tiles onto tiles") {
  IfsPtr ifs = golden();
  Tiling t0 = canonical_tiling(0, ifs);
  Tiling t1 = canonical_tiling(1, ifs);
  auto cands = candidate_isometries(t0, t1, true);
  CHECK_FALSE(cands.empty());
  for (const Similitude& e : cands) {
    CHECK(e.is_isometry());
    Tiling img = transformed(e, t0);
    CHECK_FALSE(common_tiles(img, t1).empty());
  }
  bool has_identity = false;
  for (const Similitude& e : candidate_isometries(t0, t0, true)) has_identity |= e.is_identity(1e-9);
  CHECK(has_identity);
  for (const Similitude& e : candidate_isometries(t0, t0, false)) CHECK_FALSE(e.is_identity(1e-9));
}

TEST_CASE("symmetry search") {
  IfsPtr ifs = golden();
  CHECK(symmetry_search(canonical_tiling(0, ifs)).empty());
  CHECK(symmetry_search(pi_prefix(Word{1, 2, 1, 2, 1, 2, 1, 2}, ifs)).empty());

  IfsPtr sq = Ifs::build(preset("square4"));
  Tiling grid = pi_prefix(Word{1, 1}, sq);
  auto syms = symmetry_search(grid);
  REQUIRE_FALSE(syms.empty());
  bool translation = false;
  for (const Similitude& g : syms) {
    CHECK_FALSE(g.is_identity(1e-9));
    if ((g.ortho() - Mat::Identity(2, 2)).norm() < 1e-9) translation = true;
  }
  CHECK(translation);
}
