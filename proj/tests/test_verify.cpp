#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "blowup/errors.hpp"
#include "blowup/io.hpp"
#include "blowup/verify.hpp"
#include "oracles.hpp"

using namespace blowup;

namespace {

IfsPtr golden() {
  static IfsPtr g = Ifs::build(preset("goldenb"));
  return g;
}

// Largest number of tile interiors containing one grid sample point.
int max_cover(const Tiling& t, int n) {
  const Ifs& ifs = t.ifs();
  BBox box = tile_bbox(ifs, t[0].transform);
  std::vector<Polygon> polys;
  for (const Tile& tile : t.tiles()) {
    polys.push_back(tile_polygon(ifs, tile.transform));
    for (const Vec2& v : polys.back().v) box.expand(v);
  }
  int worst = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec2 x(box.lo.x() + (i + 0.37) * (box.hi.x() - box.lo.x()) / n, box.lo.y() + (j + 0.61) * (box.hi.y() - box.lo.y()) / n);
      int c = 0;
      for (const Polygon& p : polys) c += point_strictly_inside(p, x, 1e-12);
      worst = std::max(worst, c);
    }
  return worst;
}

Eigen::Vector3d lift(const Vec2& x) {
  const double t = 1.0 / (x.squaredNorm() + 1.0);
  return {x.x() * t, x.y() * t, 1.0 - t};
}

}  // namespace

TEST_CASE("nonoverlap on canonical and prefix tilings") {
  IfsPtr ifs = golden();
  Tiling t6 = canonical_tiling(6, ifs);
  CHECK(t6.size() == 34);
  CHECK(nonoverlap_check(canonical_tiling(5, ifs)).pass);
  OverlapReport r = nonoverlap_check(t6);
  CHECK(r.pass);
  CHECK(r.authoritative);
  CHECK(r.max_overlap <= r.threshold);
  CHECK(max_cover(t6, 150) == 1);

  for (const char* theta : {"1", "12", "121", "1212", "12121"}) {
    Tiling p = pi_prefix(Word::parse(theta), ifs);
    CHECK(nonoverlap_check(p).pass);
    CHECK(max_cover(p, 80) == 1);
  }
}

TEST_CASE("nonoverlap catches a duplicated tile") {
  IfsPtr ifs = golden();
  std::vector<Tile> tiles = canonical_tiling(4, ifs).tiles();
  tiles.push_back(tiles[3]);
  Tiling bad(ifs, tiles, Provenance::derived("duplicate"));
  OverlapReport r = nonoverlap_check(bad);
  CHECK_FALSE(r.pass);
  REQUIRE(r.worst_pair);
  CHECK(r.worst_pair->first == 3);
  CHECK(r.worst_pair->second == tiles.size() - 1);
  CHECK(r.max_overlap == doctest::Approx(tile_area(*ifs, tiles[3].transform)).epsilon(1e-9));
  CHECK(max_cover(bad, 100) == 2);
}

TEST_CASE("nonoverlap in point-cloud mode is flagged") {
  IfsPtr cantor = Ifs::build(preset("cantor"));
  OverlapReport r = nonoverlap_check(canonical_tiling(2, cantor));
  CHECK_FALSE(r.authoritative);
  CHECK(r.min_separation > 0);
}

TEST_CASE("self-similarity") {
  IfsPtr ifs = golden();
  const std::vector<std::pair<std::string, std::string>> pairs{{"", "12"}, {"", "21"}, {"1", "2"}, {"2", "1"}, {"12", "21"}};
  for (const auto& [a, b] : pairs) {
    Word alpha = Word::parse(a), beta = Word::parse(b);
    const int K = static_cast<int>(alpha.size() + 3 * beta.size());
    CAPTURE(a);
    CAPTURE(b);
    SelfSimilarityReport r = self_similarity_check(alpha, beta, K, ifs);
    CHECK(r.ok);
    CHECK(r.psi.power() == -e_weight(beta, ifs->pv()));
    CHECK(r.target_prefix <= K);

    // each psi(tile) has the area of its listed pieces, and contains them
    EventuallyPeriodicWord theta{alpha, beta};
    Tiling core = pi_prefix(theta.prefix(r.core_prefix), ifs);
    Tiling whole = pi_prefix(theta.prefix(K), ifs);
    REQUIRE(r.decomposition.size() == core.size());
    for (std::size_t i = 0; i < core.size(); ++i) {
      Polygon big = tile_polygon(*ifs, compose(r.psi, core[i].transform));
      double sum = 0;
      for (std::size_t j : r.decomposition[i]) {
        Polygon piece = tile_polygon(*ifs, whole[j].transform);
        sum += polygon_area(piece);
        for (const Vec2& v : piece.v) CHECK(distance_to_polygon(big, v) < 1e-9);
      }
      CHECK(sum == doctest::Approx(polygon_area(big)).epsilon(1e-9));
    }
  }
  CHECK(self_similarity_check(Word{1}, Word{2}, 1 + 2 * 1, ifs).ok);
  CHECK_THROWS_AS(self_similarity_check(Word{1}, Word{}, 5, ifs), PreconditionError);
  CHECK_THROWS_AS(self_similarity_check(Word{1, 2}, Word{2, 1}, 3, ifs), PreconditionError);
}

TEST_CASE("self-similarity fails off the periodic family") {
  IfsPtr ifs = golden();
  // psi built from beta = 12 does not map pi((21)^k) into itself
  Word alpha{2};
  Word beta{1, 2};
  SelfSimilarityReport ok = self_similarity_check(alpha, beta, 7, ifs);
  CHECK(ok.ok);
  EventuallyPeriodicWord theta{Word{}, Word{2, 1}};
  Tiling whole = pi_prefix(theta.prefix(7), ifs);
  Similitude wrong = compose(neg_word_map(Word{1}, *ifs), ok.psi);
  TileIndex idx(whole);
  bool all_found = true;
  for (const Tile& t : pi_prefix(theta.prefix(3), ifs).tiles()) all_found &= idx.contains(compose(wrong, t.transform));
  CHECK_FALSE(all_found);
}

TEST_CASE("quasiperiodicity probe") {
  IfsPtr ifs = golden();
  Tiling t8 = canonical_tiling(8, ifs);
  std::size_t big = 0;
  while (t8[big].proto_index != 1) ++big;
  Tiling single = patch_tiling(t8, {big});
  QuasiReport r = quasiperiodicity_probe(single, t8);
  CHECK(r.found);
  CHECK(r.copies.size() == prototile_census(t8).at(1));
  CHECK(r.radius < 4 * ifs->diameter());

  Tiling t4 = canonical_tiling(4, ifs);
  QuasiReport self = quasiperiodicity_probe(t4, t4);
  CHECK(self.copies.size() == 1);
  CHECK(self.radius <= support_diameter(t4) + 1e-9);
  CHECK(self.radius >= 0.5 * support_diameter(t4));

  // every reported copy really is a copy
  Tiling p = patch_tiling(t4, patch(t4, tile_anchor(*ifs, t4[0].transform), 0.3));
  Tiling t10 = canonical_tiling(10, ifs);
  QuasiReport q = quasiperiodicity_probe(p, t10);
  REQUIRE(q.found);
  for (const Similitude& e : q.copies)
    CHECK(oracle::polygons_subset(*ifs, oracle::transforms(transformed(e, p)), oracle::transforms(t10)));

  Tiling nowhere = patch_tiling(t4, {0});
  Tiling tiny(ifs, {}, Provenance::derived("empty"));
  CHECK_FALSE(quasiperiodicity_probe(nowhere, tiny).found);
}

TEST_CASE("injectivity precondition") {
  IfsPtr ifs = golden();
  InjectivityReport r = injectivity_precondition(ifs);
  CHECK(r.conclusive);
  CHECK(r.holds);
  REQUIRE(r.pairs.size() == 1);
  CHECK(r.pairs[0].uncovered_fraction > 0);
  CHECK_FALSE(r.pairs[0].tiles_intersection);

  IfsSpec dup = preset("square4");
  dup.maps[1] = dup.maps[0];
  IfsPtr d = Ifs::build(dup);
  InjectivityReport rd = injectivity_precondition(d);
  CHECK_FALSE(rd.holds);
  CHECK(rd.pairs[0].tiles_intersection);

  InjectivityReport rc = injectivity_precondition(Ifs::build(preset("cantor")));
  CHECK_FALSE(rc.conclusive);
}

TEST_CASE("tiling distance") {
  IfsPtr ifs = golden();
  EventuallyPeriodicWord theta{Word{}, Word{1, 2}};
  Tiling a = pi_prefix(theta.prefix(3), ifs);
  DistanceReport same = tiling_distance(a, a, 2000);
  CHECK(same.distance <= same.resolution);

  Tiling b = pi_prefix(theta.prefix(5), ifs);
  Tiling c = pi_prefix(theta.prefix(7), ifs);
  DistanceReport ab = tiling_distance(a, b, 2000), ba = tiling_distance(b, a, 2000);
  CHECK(std::abs(ab.distance - ba.distance) <= ab.resolution + ba.resolution);
  DistanceReport bc = tiling_distance(b, c, 2000), ac = tiling_distance(a, c, 2000);
  CHECK(ac.distance <= ab.distance + bc.distance + ab.resolution + bc.resolution + ac.resolution);

  // decreasing along the prefix family
  double previous = 10;
  for (int k = 2; k <= 8; ++k) {
    DistanceReport d = tiling_distance(pi_prefix(theta.prefix(k), ifs), pi_prefix(theta.prefix(k + 1), ifs), 4000);
    CHECK(d.distance <= previous + 2 * d.resolution);
    previous = d.distance;
  }

  // a small far-away copy sits at the projected separation of the two pieces
  Tiling small = transformed(ifs->scaling(12), canonical_tiling(0, ifs));
  Vec far(2);
  far << 3.0, 1.0;
  Tiling moved = transformed(Similitude::translation(far, ifs->s()), small);
  DistanceReport fd = tiling_distance(small, moved, 2000);
  const double centre_gap = std::asin((lift({0, 0}) - lift({3.0, 1.0})).norm());
  const double spread = std::pow(ifs->s(), 12) * ifs->diameter();
  CHECK(std::abs(fd.distance - centre_gap) <= 2 * spread + fd.resolution);

  CHECK_THROWS_AS(tiling_distance(a, b, 10), PreconditionError);
}
