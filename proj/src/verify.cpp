#include "blowup/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blowup/errors.hpp"

namespace blowup {

namespace {

struct Shape {
  BBox box;
  std::vector<Triangle> tris;
};

Shape shape_of(const Ifs& ifs, const Similitude& t) {
  Shape sh;
  for (const Triangle& tri : ifs.triangles())
    sh.tris.push_back({t.apply2(tri[0]), t.apply2(tri[1]), t.apply2(tri[2])});
  sh.box = tile_bbox(ifs, t);
  return sh;
}

// Index pairs (i < j) whose boxes overlap, by a sweep over box.lo.x.
template <typename F>
void for_overlapping_boxes(const std::vector<BBox>& boxes, F&& f) {
  std::vector<std::size_t> order(boxes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return boxes[a].lo.x() < boxes[b].lo.x(); });
  for (std::size_t a = 0; a < order.size(); ++a) {
    const BBox& ba = boxes[order[a]];
    for (std::size_t b = a + 1; b < order.size() && boxes[order[b]].lo.x() <= ba.hi.x(); ++b) {
      if (!ba.overlaps(boxes[order[b]])) continue;
      f(std::min(order[a], order[b]), std::max(order[a], order[b]));
    }
  }
}

Vec2 to2(const Vec& v) { return Vec2(v(0), v.size() > 1 ? v(1) : 0.0); }

}  // namespace

OverlapReport nonoverlap_check(const Tiling& t) {
  OverlapReport rep;
  const Ifs& ifs = t.ifs();
  std::vector<BBox> boxes;
  for (const Tile& tile : t.tiles()) boxes.push_back(tile_bbox(ifs, tile.transform));

  if (!ifs.polygon_mode()) {
    rep.authoritative = false;
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::vector<Vec>> pts;
    for (const Tile& tile : t.tiles()) pts.push_back(tile_points(ifs, tile.transform));
    for_overlapping_boxes(boxes, [&](std::size_t i, std::size_t j) {
      for (const Vec& p : pts[i])
        for (const Vec& q : pts[j]) {
          double d = (p - q).norm();
          if (d < best) best = d, rep.worst_pair = std::pair{i, j};
        }
    });
    rep.min_separation = best;
    return rep;
  }

  int max_proto = 0;
  for (const Tile& tile : t.tiles()) max_proto = std::max(max_proto, tile.proto_index);
  rep.threshold = 1e-9 * ifs.geom().area * std::pow(ifs.s(), 2 * max_proto);
  std::vector<Shape> shapes;
  for (const Tile& tile : t.tiles()) shapes.push_back(shape_of(ifs, tile.transform));
  for_overlapping_boxes(boxes, [&](std::size_t i, std::size_t j) {
    double a = triangles_overlap_area(shapes[i].tris, shapes[j].tris);
    if (!rep.worst_pair || a > rep.max_overlap) {
      rep.max_overlap = std::max(rep.max_overlap, a);
      rep.worst_pair = std::pair{i, j};
    }
  });
  rep.pass = rep.max_overlap <= rep.threshold;
  return rep;
}

// ---- self-similarity -------------------------------------------------------------

namespace {

// Writes into `out` the tiles whose union is x(A); false if x(A) is not such a union.
bool decompose(const Similitude& x, const Tiling& t, const TileIndex& idx, std::vector<std::size_t>& out) {
  if (auto hit = idx.find(x)) {
    out.push_back(*hit);
    return true;
  }
  const Ifs& ifs = t.ifs();
  if (x.power() >= ifs.a_max()) return false;
  for (int i = 1; i <= ifs.n(); ++i)
    if (!decompose(x.compose(ifs.map(i)), t, idx, out)) return false;
  return true;
}

}  // namespace

SelfSimilarityReport self_similarity_check(const Word& alpha, const Word& beta, int K, const IfsPtr& ifs) {
  if (beta.empty()) throw PreconditionError("self-similarity needs a nonempty period beta");
  const int la = static_cast<int>(alpha.size()), lb = static_cast<int>(beta.size());
  if (K < la + lb) throw PreconditionError("prefix length K must be at least |alpha| + |beta|");
  const EventuallyPeriodicWord theta{alpha, beta};
  SelfSimilarityReport rep{true, word_map(Word{}, *ifs), 0, 0, {}, std::nullopt};
  const Similitude fa = neg_word_map(alpha, *ifs);
  rep.psi = fa.compose(neg_word_map(beta, *ifs)).compose(fa.inverse());
  rep.core_prefix = la + ((K - la - lb) / lb) * lb;
  rep.target_prefix = rep.core_prefix + lb;
  const Tiling core = pi_prefix(theta.prefix(static_cast<std::size_t>(rep.core_prefix)), ifs);
  const Tiling whole = pi_prefix(theta.prefix(static_cast<std::size_t>(K)), ifs);
  TileIndex idx(whole);
  for (std::size_t i = 0; i < core.size(); ++i) {
    std::vector<std::size_t> parts;
    if (!decompose(rep.psi.compose(core[i].transform), whole, idx, parts)) {
      rep.ok = false;
      rep.failed_tile = i;
      return rep;
    }
    rep.decomposition.push_back(std::move(parts));
  }
  return rep;
}

// ---- quasiperiodicity ------------------------------------------------------------

QuasiReport quasiperiodicity_probe(const Tiling& p, const Tiling& t) {
  if (p.empty()) throw PreconditionError("empty patch");
  QuasiReport rep;
  rep.radius = std::numeric_limits<double>::infinity();
  if (t.empty()) return rep;
  const Ifs& ifs = t.ifs();
  TileIndex idx(t);
  const Similitude p0_inv = p[0].transform.inverse();
  std::vector<std::vector<Vec2>> copy_points;
  for (const Tile& u : t.tiles()) {
    if (u.transform.power() != p[0].transform.power()) continue;
    for (const Similitude& g : ifs.symmetries()) {
      Similitude e = u.transform.compose(g).compose(p0_inv);
      bool all = true;
      for (const Tile& q : p.tiles())
        if (!idx.contains(e.compose(q.transform))) {
          all = false;
          break;
        }
      if (!all) continue;
      // Copies that differ only by a self-map of the whole patch count once.
      bool dup = false;
      for (const Similitude& c : rep.copies)
        if (same_tiles(transformed(c, p), transformed(e, p))) dup = true;
      if (dup) continue;
      std::vector<Vec2> pts;
      for (const Tile& q : p.tiles())
        for (const Vec& x : tile_points(ifs, e.compose(q.transform))) pts.push_back(to2(x));
      copy_points.push_back(std::move(pts));
      rep.copies.push_back(std::move(e));
    }
  }
  rep.found = !rep.copies.empty();
  if (!rep.found) return rep;

  std::vector<Vec2> anchors;
  for (const Tile& u : t.tiles()) anchors.push_back(to2(tile_anchor(ifs, u.transform)));
  BBox box = BBox::of(anchors);
  const Vec2 centre = 0.5 * (box.lo + box.hi);
  const double window = 0.25 * support_diameter(t);
  double worst = 0;
  for (const Vec2& c : anchors) {
    if ((c - centre).norm() > window) continue;
    ++rep.core_centres;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& pts : copy_points) {
      double far = 0;
      for (const Vec2& x : pts) far = std::max(far, (x - c).norm());
      best = std::min(best, far);
    }
    worst = std::max(worst, best);
  }
  rep.radius = worst;
  return rep;
}

// ---- injectivity -----------------------------------------------------------------

InjectivityReport injectivity_precondition(const IfsPtr& ifs) {
  InjectivityReport rep;
  if (!ifs->polygon_mode()) {
    rep.conclusive = false;
    return rep;
  }
  rep.holds = true;
  std::vector<Tiling> first;
  for (int i = 1; i <= ifs->n(); ++i) first.push_back(pi_prefix(Word{i}, ifs));
  for (int i = 1; i <= ifs->n(); ++i) {
    for (int j = i + 1; j <= ifs->n(); ++j) {
      CommonTilingReport c = common_tiling(first[i - 1], first[j - 1]);
      InjectivityReport::Pair pr{i, j, c.common, c.common_area, c.intersection_area, c.uncovered_fraction(), c.tiles_intersection};
      if (c.tiles_intersection) rep.holds = false;
      rep.pairs.push_back(pr);
    }
  }
  return rep;
}

// ---- tiling distance -------------------------------------------------------------

namespace {

struct Samples {
  std::vector<Eigen::Vector3d> points;
  double spacing = 0;
};

Eigen::Vector3d to_sphere(const Vec2& x) {
  const double t = 1.0 / (x.squaredNorm() + 1.0);
  return {x.x() * t, x.y() * t, 1.0 - t};
}

Eigen::Vector3d onto_sphere(const Eigen::Vector3d& p) {
  const Eigen::Vector3d c(0, 0, 0.5);
  return c + 0.5 * (p - c).normalized();
}

// Samples are equally spaced in chord length along the projected boundary,
// so the spacing bounds the sampling error in the sphere's metric.
Samples boundary_samples(const Tiling& t, std::size_t count) {
  const Ifs& ifs = t.ifs();
  Samples out;
  if (!ifs.polygon_mode()) {
    std::vector<Vec2> pts;
    for (const Tile& tile : t.tiles())
      for (const Vec& p : tile_points(ifs, tile.transform)) pts.push_back(to2(p));
    const std::size_t step = std::max<std::size_t>(1, pts.size() / count);
    for (std::size_t i = 0; i < pts.size(); i += step) out.points.push_back(to_sphere(pts[i]));
    return out;
  }
  constexpr int kPieces = 8;
  std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>> segs;
  double total = 0;
  for (const Tile& tile : t.tiles()) {
    Polygon p = tile_polygon(ifs, tile.transform);
    for (std::size_t i = 0; i < p.v.size(); ++i) {
      const Vec2 a = p.v[i], b = p.v[(i + 1) % p.v.size()];
      Eigen::Vector3d prev = to_sphere(a);
      for (int r = 1; r <= kPieces; ++r) {
        Eigen::Vector3d cur = to_sphere(a + (static_cast<double>(r) / kPieces) * (b - a));
        segs.emplace_back(prev, cur);
        total += (cur - prev).norm();
        prev = cur;
      }
    }
  }
  const double h = total / static_cast<double>(count);
  out.spacing = h;
  double base = 0;
  std::size_t e = 0;
  for (std::size_t k = 0; k < count && e < segs.size(); ++k) {
    const double s = (static_cast<double>(k) + 0.5) * h;
    double len = (segs[e].second - segs[e].first).norm();
    while (s > base + len && e + 1 < segs.size()) {
      base += len;
      ++e;
      len = (segs[e].second - segs[e].first).norm();
    }
    const double u = len > 0 ? std::clamp((s - base) / len, 0.0, 1.0) : 0.0;
    out.points.push_back(onto_sphere(segs[e].first + u * (segs[e].second - segs[e].first)));
  }
  return out;
}

double directed(const std::vector<Eigen::Vector3d>& a, const std::vector<Eigen::Vector3d>& b) {
  double worst = 0;
  for (const auto& p : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : b) {
      best = std::min(best, (p - q).squaredNorm());
      if (best <= worst * worst) break;
    }
    worst = std::max(worst, std::sqrt(best));
  }
  return worst;
}

}  // namespace

DistanceReport tiling_distance(const Tiling& a, const Tiling& b, std::size_t samples) {
  if (samples < 100) throw PreconditionError("tiling distance needs at least 100 samples");
  if (a.empty() || b.empty()) throw PreconditionError("tiling distance of an empty tiling");
  if (a.ifs().dim() != 2 || b.ifs().dim() != 2) throw DimensionMismatch("tiling distance is planar only");
  Samples sa = boundary_samples(a, samples), sb = boundary_samples(b, samples);
  const double chord = std::max(directed(sa.points, sb.points), directed(sb.points, sa.points));
  // On a sphere of radius 1/2 a chord c subtends the geodesic arc asin(c).
  DistanceReport rep;
  rep.distance = std::asin(std::min(1.0, chord));
  rep.resolution = std::max(sa.spacing, sb.spacing);
  return rep;
}

}  // namespace blowup
