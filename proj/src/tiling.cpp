#include "blowup/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "blowup/errors.hpp"

namespace blowup {

std::string Provenance::str() const {
  switch (kind) {
    case Kind::Canonical:
      return "T_" + std::to_string(level);
    case Kind::Prefix:
      return "pi(" + (theta.empty() ? std::string("-") : theta.str()) + ")";
    case Kind::Derived:
      break;
  }
  return note.empty() ? "derived" : note;
}

Tiling::Tiling(IfsPtr ifs, std::vector<Tile> tiles, Provenance provenance)
    : ifs_(std::move(ifs)), tiles_(std::move(tiles)), provenance_(std::move(provenance)) {
  if (!ifs_) throw PreconditionError("tiling without an IFS");
}

// ---- tile geometry -------------------------------------------------------------

bool same_tile(const Ifs& ifs, const Similitude& t1, const Similitude& t2, double tol) {
  if (t1.power() != t2.power()) return false;
  for (const Similitude& g : ifs.symmetries())
    if (t1.approx_equal(t2.compose(g), tol)) return true;
  return false;
}

Polygon tile_polygon(const Ifs& ifs, const Similitude& t) {
  if (!ifs.polygon_mode()) throw PreconditionError("tile polygon requested in point-cloud mode");
  Polygon p;
  p.v.reserve(ifs.geom().polygon.v.size());
  for (const Vec2& x : ifs.geom().polygon.v) p.v.push_back(t.apply2(x));
  return p;
}

std::vector<Vec> tile_points(const Ifs& ifs, const Similitude& t) {
  std::vector<Vec> out;
  if (ifs.polygon_mode()) {
    for (const Vec2& x : ifs.geom().polygon.v) out.push_back(t.apply(Vec(x)));
    return out;
  }
  out.reserve(ifs.geom().points.size());
  for (const Vec& x : ifs.geom().points) out.push_back(t.apply(x));
  return out;
}

Vec tile_anchor(const Ifs& ifs, const Similitude& t) { return t.apply(ifs.anchor()); }

BBox tile_bbox(const Ifs& ifs, const Similitude& t) {
  if (ifs.polygon_mode()) return BBox::of(tile_polygon(ifs, t).v);
  // Image of the attractor's bounding box corners; conservative.
  const Vec& lo = ifs.geom().lo;
  const Vec& hi = ifs.geom().hi;
  const int d = ifs.dim();
  std::vector<Vec2> corners;
  for (int mask = 0; mask < (1 << d); ++mask) {
    Vec c(d);
    for (int j = 0; j < d; ++j) c(j) = (mask >> j) & 1 ? hi(j) : lo(j);
    Vec img = t.apply(c);
    corners.emplace_back(img(0), d > 1 ? img(1) : 0.0);
  }
  return BBox::of(corners);
}

double tile_area(const Ifs& ifs, const Similitude& t) { return polygon_area(tile_polygon(ifs, t)); }

double tiling_area(const Tiling& t) {
  double sum = 0;
  for (const Tile& tile : t.tiles()) sum += tile_area(t.ifs(), tile.transform);
  return sum;
}

double support_diameter(const Tiling& t) {
  if (t.empty()) return 0;
  const Ifs& ifs = t.ifs();
  if (ifs.polygon_mode()) {
    std::vector<Vec2> pts;
    for (const Tile& tile : t.tiles())
      for (const Vec2& x : ifs.geom().polygon.v) pts.push_back(tile.transform.apply2(x));
    return polygon_diameter(pts);
  }
  std::vector<Vec> pts;
  for (const Tile& tile : t.tiles())
    for (const Vec& p : tile_points(ifs, tile.transform)) pts.push_back(p);
  double d = 0;
  if (ifs.dim() == 2) {
    std::vector<Vec2> p2;
    for (const Vec& p : pts) p2.emplace_back(p(0), p(1));
    return polygon_diameter(p2);
  }
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, (pts[i] - pts[j]).norm());
  return d;
}

// ---- TileIndex -------------------------------------------------------------------

TileIndex::TileIndex(const Tiling& t, double tol) : tiling_(&t), tol_(tol), cell_(1e-3) {
  buckets_.reserve(t.size() * 2);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Similitude& tr = t[i].transform;
    buckets_.emplace(key(tr.power(), tile_anchor(t.ifs(), tr), 0, 0, 0), i);
  }
}

TileIndex::Key TileIndex::key(int power, const Vec& anchor, int dx, int dy, int dz) const {
  auto q = [&](int j, int off) -> std::int64_t {
    if (j >= anchor.size()) return 0;
    return static_cast<std::int64_t>(std::floor(anchor(j) / cell_)) + off;
  };
  std::uint64_t h = static_cast<std::uint64_t>(power + 1024);
  for (std::int64_t c : {q(0, dx), q(1, dy), q(2, dz)}) {
    h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::optional<std::size_t> TileIndex::find(const Similitude& transform) const {
  const Ifs& ifs = tiling_->ifs();
  const Vec a = tile_anchor(ifs, transform);
  const int d = ifs.dim();
  std::optional<std::size_t> best;
  for (int dx = -1; dx <= 1; ++dx)
    for (int dy = (d > 1 ? -1 : 0); dy <= (d > 1 ? 1 : 0); ++dy)
      for (int dz = (d > 2 ? -1 : 0); dz <= (d > 2 ? 1 : 0); ++dz) {
        auto [lo, hi] = buckets_.equal_range(key(transform.power(), a, dx, dy, dz));
        for (auto it = lo; it != hi; ++it) {
          if (same_tile(ifs, transform, (*tiling_)[it->second].transform, tol_))
            if (!best || it->second < *best) best = it->second;
        }
      }
  return best;
}

// ---- PointLocator ------------------------------------------------------------------

PointLocator::PointLocator(const Tiling& t) : tiling_(&t) {
  if (!t.ifs().polygon_mode()) throw PreconditionError("point location needs polygon geometry");
  double extent = 0;
  for (const Tile& tile : t.tiles()) {
    polys_.push_back(tile_polygon(t.ifs(), tile.transform));
    boxes_.push_back(BBox::of(polys_.back().v));
    extent = std::max({extent, boxes_.back().hi.x() - boxes_.back().lo.x(), boxes_.back().hi.y() - boxes_.back().lo.y()});
  }
  cell_ = extent > 0 ? extent : 1.0;
  for (std::size_t i = 0; i < boxes_.size(); ++i) {
    const BBox& b = boxes_[i];
    for (auto cx = static_cast<std::int64_t>(std::floor(b.lo.x() / cell_)); cx <= std::floor(b.hi.x() / cell_); ++cx)
      for (auto cy = static_cast<std::int64_t>(std::floor(b.lo.y() / cell_)); cy <= std::floor(b.hi.y() / cell_); ++cy)
        grid_.emplace(cell_key(cx, cy), i);
  }
}

std::optional<std::size_t> PointLocator::locate(const Vec2& p, double tol) const {
  auto key = cell_key(static_cast<std::int64_t>(std::floor(p.x() / cell_)), static_cast<std::int64_t>(std::floor(p.y() / cell_)));
  auto [lo, hi] = grid_.equal_range(key);
  std::optional<std::size_t> best;
  for (auto it = lo; it != hi; ++it) {
    const std::size_t i = it->second;
    if (!boxes_[i].contains(p)) continue;
    if (point_strictly_inside(polys_[i], p, tol))
      if (!best || i < *best) best = i;
  }
  return best;
}

// ---- constructions ---------------------------------------------------------------

Tiling canonical_tiling(int k, const IfsPtr& ifs) {
  if (k < 0) throw PreconditionError("level must be nonnegative");
  const OmegaSet omega = omega_level(k, ifs->pv());
  const Similitude zoom = ifs->scaling(-k);
  std::vector<Tile> tiles;
  tiles.reserve(omega.size());
  for (const Word& sigma : omega) {
    Similitude t = zoom.compose(word_map(sigma, *ifs));
    int p = t.power();
    tiles.push_back(Tile{AbsoluteAddress{Word{}, sigma}, std::move(t), p});
  }
  return Tiling(ifs, std::move(tiles), Provenance::canonical(k));
}

Tiling pi_prefix(const Word& theta, const IfsPtr& ifs) {
  validate_word(theta, ifs->pv());
  const int e = e_weight(theta, ifs->pv());
  if (e > max_level()) throw LevelCapExceeded("e(theta) = " + std::to_string(e) + " exceeds the level cap");
  const OmegaSet omega = omega_level(e, ifs->pv());
  // f_{-theta|j} for every j, so each tile costs one composition chain on omega.
  std::vector<Similitude> neg{ifs->identity()};
  for (std::size_t j = 0; j < theta.size(); ++j) neg.push_back(neg.back().compose(ifs->map(theta[j]).inverse()));
  std::vector<Tile> tiles;
  tiles.reserve(omega.size());
  for (const Word& sigma : omega) {
    AbsoluteAddress addr = normalize_address(theta, sigma);
    Similitude t = neg[addr.theta.size()].compose(word_map(addr.omega, *ifs));
    int p = t.power();
    tiles.push_back(Tile{std::move(addr), std::move(t), p});
  }
  return Tiling(ifs, std::move(tiles), Provenance::prefix(theta, e));
}

Similitude prefix_isometry(const Word& theta, const Ifs& ifs) {
  return neg_word_map(theta, ifs).compose(ifs.scaling(e_weight(theta, ifs.pv())));
}

Tiling transformed(const Similitude& g, const Tiling& t, bool keep_addresses) {
  std::vector<Tile> tiles;
  tiles.reserve(t.size());
  for (const Tile& tile : t.tiles()) {
    Similitude tr = g.compose(tile.transform);
    int p = tr.power();
    tiles.push_back(Tile{keep_addresses ? tile.address : std::nullopt, std::move(tr), p});
  }
  return Tiling(t.ifs_ptr(), std::move(tiles), Provenance::derived("image of " + t.provenance().str()));
}

bool tiles_subset(const Tiling& a, const Tiling& b, double tol) {
  TileIndex idx(b, tol);
  for (const Tile& t : a.tiles())
    if (!idx.contains(t.transform)) return false;
  return true;
}

bool same_tiles(const Tiling& a, const Tiling& b, double tol) {
  if (a.size() != b.size()) return false;
  // Equal sizes plus inclusion both ways rules out repeated tiles on one side.
  return tiles_subset(a, b, tol) && tiles_subset(b, a, tol);
}

std::vector<std::size_t> common_tiles(const Tiling& a, const Tiling& b, double tol) {
  TileIndex idx(b, tol);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (idx.contains(a[i].transform)) out.push_back(i);
  return out;
}

namespace {

struct TileShape {
  BBox box;
  std::vector<Triangle> tris;
};

std::vector<TileShape> shapes_of(const Tiling& t) {
  const Ifs& ifs = t.ifs();
  std::vector<TileShape> out;
  out.reserve(t.size());
  for (const Tile& tile : t.tiles()) {
    TileShape sh;
    for (const Triangle& tri : ifs.triangles())
      sh.tris.push_back({tile.transform.apply2(tri[0]), tile.transform.apply2(tri[1]), tile.transform.apply2(tri[2])});
    sh.box = tile_bbox(ifs, tile.transform);
    out.push_back(std::move(sh));
  }
  return out;
}

}  // namespace

double support_intersection_area(const Tiling& a, const Tiling& b) {
  if (!a.ifs().polygon_mode()) throw PreconditionError("intersection area needs polygon geometry");
  std::vector<TileShape> sa = shapes_of(a), sb = shapes_of(b);
  std::vector<std::size_t> order(sb.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sb[x].box.lo.x() < sb[y].box.lo.x(); });
  std::vector<double> los;
  for (std::size_t i : order) los.push_back(sb[i].box.lo.x());
  double width = 0;
  for (const TileShape& s : sb) width = std::max(width, s.box.hi.x() - s.box.lo.x());
  double total = 0;
  for (const TileShape& x : sa) {
    auto first = std::lower_bound(los.begin(), los.end(), x.box.lo.x() - width);
    for (auto it = first; it != los.end() && *it <= x.box.hi.x(); ++it) {
      const TileShape& y = sb[order[static_cast<std::size_t>(it - los.begin())]];
      if (!x.box.overlaps(y.box)) continue;
      total += triangles_overlap_area(x.tris, y.tris);
    }
  }
  return total;
}

double CommonTilingReport::uncovered_fraction() const {
  if (intersection_area <= 0) return 0;
  return std::max(0.0, intersection_area - common_area) / intersection_area;
}

Tiling distinct_tiles(const Tiling& t, double tol) {
  TileIndex idx(t, tol);
  std::vector<Tile> keep;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (idx.find(t[i].transform) == i) keep.push_back(t[i]);
  if (keep.size() == t.size()) return t;
  return Tiling(t.ifs_ptr(), std::move(keep), t.provenance());
}

CommonTilingReport common_tiling(const Tiling& a_in, const Tiling& b_in, double rel_tol) {
  CommonTilingReport r;
  const Tiling a = distinct_tiles(a_in);
  const Tiling b = distinct_tiles(b_in);
  std::vector<std::size_t> common = common_tiles(a, b);
  r.common = common.size();
  for (std::size_t i : common) r.common_area += tile_area(a.ifs(), a[i].transform);
  r.intersection_area = support_intersection_area(a, b);
  r.tiles_intersection = r.common > 0 && std::abs(r.intersection_area - r.common_area) <= rel_tol * r.intersection_area;
  return r;
}

// ---- structure checks ----------------------------------------------------------

NestingResult nesting_check(const std::vector<Tiling>& chain, double tol) {
  NestingResult res;
  for (std::size_t k = 1; k < chain.size(); ++k) {
    TileIndex idx(chain[k], tol);
    for (const Tile& t : chain[k - 1].tiles()) {
      auto hit = idx.find(t.transform);
      bool ok = hit.has_value();
      if (ok && t.address && chain[k][*hit].address) ok = *t.address == *chain[k][*hit].address;
      if (!ok) {
        res.ok = false;
        res.failed_prefix = k;
        res.witness = t;
        return res;
      }
    }
  }
  return res;
}

NestingResult nesting_check(const Word& theta, const IfsPtr& ifs) {
  if (theta.empty()) throw PreconditionError("nesting check needs a nonempty word");
  std::vector<Tiling> chain;
  for (std::size_t k = 0; k <= theta.size(); ++k) chain.push_back(pi_prefix(theta.prefix(k), ifs));
  return nesting_check(chain);
}

std::map<int, std::size_t> prototile_census(const Tiling& t) {
  std::map<int, std::size_t> out;
  for (const Tile& tile : t.tiles()) ++out[tile.proto_index];
  return out;
}

std::vector<std::size_t> patch(const Tiling& t, const Vec& center, double radius) {
  if (!(radius > 0)) throw PreconditionError("patch radius must be positive");
  const Ifs& ifs = t.ifs();
  std::vector<std::size_t> out;
  const Vec2 c(center(0), center.size() > 1 ? center(1) : 0.0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Similitude& tr = t[i].transform;
    BBox b = tile_bbox(ifs, tr);
    Vec2 nearest = c.cwiseMax(b.lo).cwiseMin(b.hi);
    if ((nearest - c).norm() > radius) continue;
    if (ifs.polygon_mode()) {
      if (distance_to_polygon(tile_polygon(ifs, tr), c) <= radius) out.push_back(i);
    } else {
      for (const Vec& p : tile_points(ifs, tr)) {
        if ((p - center).norm() <= radius) {
          out.push_back(i);
          break;
        }
      }
    }
  }
  return out;
}

Tiling patch_tiling(const Tiling& t, const std::vector<std::size_t>& indices) {
  std::vector<Tile> tiles;
  for (std::size_t i : indices) tiles.push_back(t[i]);
  return Tiling(t.ifs_ptr(), std::move(tiles), Provenance::derived("patch of " + t.provenance().str()));
}

int diameter_to_level(const Tiling& t) {
  if (!t.ifs().polygon_mode()) throw PreconditionError("diameter_to_level needs polygon geometry");
  if (t.empty()) throw PreconditionError("empty tiling has no diameter");
  const double d = support_diameter(t);
  const double est = (std::log(t.ifs().diameter()) - std::log(d)) / std::log(t.ifs().s());
  const double r = std::round(est);
  if (std::abs(est - r) > 0.4) throw InconsistencyError("support diameter gives a non-integer level " + std::to_string(est));
  return static_cast<int>(r);
}

bool tkformula_check(int k, const IfsPtr& ifs) {
  const PowerVector& pv = ifs->pv();
  if (k < pv.a_max()) throw PreconditionError("the level formula needs k >= a_max");
  Tiling tk = canonical_tiling(k, ifs);
  std::vector<Tile> pieces;
  for (int i = 1; i <= pv.size(); ++i) {
    Similitude e = ifs->scaling(-k).compose(ifs->map(i)).compose(ifs->scaling(k - pv[i]));
    Tiling part = transformed(e, canonical_tiling(k - pv[i], ifs));
    for (const Tile& t : part.tiles()) pieces.push_back(t);
  }
  Tiling unionT(ifs, std::move(pieces), Provenance::derived("level formula"));
  return same_tiles(unionT, tk);
}

bool refinement_check(int k, const IfsPtr& ifs) {
  const PowerVector& pv = ifs->pv();
  const OmegaSet cur = omega_level(k, pv);
  const OmegaSet next = omega_level(k + 1, pv);
  std::set<Word> used;
  Tiling tnext = canonical_tiling(k + 1, ifs);
  TileIndex idx(tnext);
  const Similitude zoom = ifs->scaling(-(k + 1));
  for (const Word& sigma : cur) {
    std::vector<Word> parts;
    if (omega_contains(next, sigma)) {
      parts.push_back(sigma);
    } else {
      if (e_weight(sigma, pv) != k + 1) return false;
      for (int i = 1; i <= pv.size(); ++i) {
        if (!omega_contains(next, sigma.with(i))) return false;
        parts.push_back(sigma.with(i));
      }
    }
    for (const Word& w : parts) {
      if (!used.insert(w).second) return false;
      // s^{-1} s^{-k} f_sigma f_i is the tile .sigma i of T_{k+1}.
      if (!idx.contains(zoom.compose(word_map(w, *ifs)))) return false;
    }
  }
  return used.size() == next.size();
}

}  // namespace blowup
