// Canonical tilings T_k, prefix tilings pi(theta), and tile-set operations.
//
// T_k       = { s^{-k} f_sigma(A)        : sigma in Omega_k }
// pi(theta) = { f_{-theta} f_sigma(A)    : sigma in Omega_{e(theta)} }
//
// Tiles carry their normalized absolute address whenever the construction
// provides one; that address is their identity inside a construction. Tilings
// produced by different constructions are compared geometrically through a
// TileIndex (transform parameters within kMatchTol, modulo the attractor's
// isometric self-maps).

#pragma once

#include <cstddef>
#include <iterator>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "blowup/geometry.hpp"
#include "blowup/ifs.hpp"
#include "blowup/symbolic.hpp"

namespace blowup {

struct Tile {
  std::optional<AbsoluteAddress> address;
  Similitude transform;
  int proto_index = 0;  // tile is isometric to s^{proto_index} A
};

struct Provenance {
  enum class Kind { Canonical, Prefix, Derived };
  Kind kind = Kind::Derived;
  int level = 0;  // Canonical: k; Prefix: e(theta)
  Word theta;     // Prefix only
  std::string note;

  static Provenance canonical(int k) { return {Kind::Canonical, k, {}, {}}; }
  static Provenance prefix(Word theta, int e) { return {Kind::Prefix, e, std::move(theta), {}}; }
  static Provenance derived(std::string note) { return {Kind::Derived, 0, {}, std::move(note)}; }
  std::string str() const;
};

class Tiling {
 public:
  Tiling(IfsPtr ifs, std::vector<Tile> tiles, Provenance provenance);

  const Ifs& ifs() const { return *ifs_; }
  const IfsPtr& ifs_ptr() const { return ifs_; }
  const std::vector<Tile>& tiles() const { return tiles_; }
  std::size_t size() const { return tiles_.size(); }
  bool empty() const { return tiles_.empty(); }
  const Tile& operator[](std::size_t i) const { return tiles_[i]; }
  const Provenance& provenance() const { return provenance_; }

 private:
  IfsPtr ifs_;
  std::vector<Tile> tiles_;
  Provenance provenance_;
};

// ---- tile geometry -------------------------------------------------------------

// Same set: equal power and t2^{-1} t1 is a self-map of A (within tol).
bool same_tile(const Ifs& ifs, const Similitude& t1, const Similitude& t2, double tol = kMatchTol);

Polygon tile_polygon(const Ifs& ifs, const Similitude& t);
std::vector<Vec> tile_points(const Ifs& ifs, const Similitude& t);  // point-cloud mode
Vec tile_anchor(const Ifs& ifs, const Similitude& t);
BBox tile_bbox(const Ifs& ifs, const Similitude& t);  // first two coordinates
double tile_area(const Ifs& ifs, const Similitude& t);  // shoelace on the image polygon

double tiling_area(const Tiling& t);
double support_diameter(const Tiling& t);

// Hash lookup of tiles by anchor point, verified by same_tile.
class TileIndex {
 public:
  explicit TileIndex(const Tiling& t, double tol = kMatchTol);

  std::optional<std::size_t> find(const Similitude& transform) const;
  bool contains(const Similitude& transform) const { return find(transform).has_value(); }

 private:
  using Key = std::uint64_t;
  Key key(int power, const Vec& anchor, int dx, int dy, int dz) const;

  const Tiling* tiling_;
  double tol_;
  double cell_;
  std::unordered_multimap<Key, std::size_t> buckets_;
};

// Finds the tile whose interior contains a point (polygon mode).
class PointLocator {
 public:
  explicit PointLocator(const Tiling& t);
  std::optional<std::size_t> locate(const Vec2& p, double tol = 1e-9) const;

 private:
  std::int64_t cell_key(std::int64_t cx, std::int64_t cy) const { return cx * 1000003 + cy; }

  const Tiling* tiling_;
  double cell_ = 1;
  std::vector<Polygon> polys_;
  std::vector<BBox> boxes_;
  std::unordered_multimap<std::int64_t, std::size_t> grid_;
};

// ---- constructions ---------------------------------------------------------------

Tiling canonical_tiling(int k, const IfsPtr& ifs);
Tiling pi_prefix(const Word& theta, const IfsPtr& ifs);

// E_theta = f_{-theta} o s^{e(theta)}, the isometry taking T_{e(theta)} to pi(theta).
Similitude prefix_isometry(const Word& theta, const Ifs& ifs);

// G applied to every tile; addresses are dropped unless keep_addresses.
Tiling transformed(const Similitude& g, const Tiling& t, bool keep_addresses = false);

// Every tile of `a` appears in `b`.
bool tiles_subset(const Tiling& a, const Tiling& b, double tol = kMatchTol);
bool same_tiles(const Tiling& a, const Tiling& b, double tol = kMatchTol);
// Tiles of `a` that also appear in `b`, as indices into `a`.
std::vector<std::size_t> common_tiles(const Tiling& a, const Tiling& b, double tol = kMatchTol);

// Area of support(a) n support(b), summed over overlapping tile pairs.
double support_intersection_area(const Tiling& a, const Tiling& b);

// The same tiling with repeated tiles (equal as sets) listed once.
Tiling distinct_tiles(const Tiling& t, double tol = kMatchTol);

struct CommonTilingReport {
  std::size_t common = 0;
  double common_area = 0;
  double intersection_area = 0;
  bool tiles_intersection = false;  // common tiles cover the support intersection
  double uncovered_fraction() const;
};

// Whether a n b is a (nonempty) tiling of support(a) n support(b): the areas
// must agree within `rel_tol` relative.
CommonTilingReport common_tiling(const Tiling& a, const Tiling& b, double rel_tol = kMatchTol);

// ---- structure checks ----------------------------------------------------------

struct NestingResult {
  bool ok = true;
  std::size_t failed_prefix = 0;  // k with chain[k-1] not inside chain[k]
  std::optional<Tile> witness;
};

NestingResult nesting_check(const std::vector<Tiling>& chain, double tol = kMatchTol);
NestingResult nesting_check(const Word& theta, const IfsPtr& ifs);

std::map<int, std::size_t> prototile_census(const Tiling& t);

std::vector<std::size_t> patch(const Tiling& t, const Vec& center, double radius);
Tiling patch_tiling(const Tiling& t, const std::vector<std::size_t>& indices);

// e(theta) recovered from the support diameter; throws InconsistencyError when
// the estimate is more than 0.4 away from an integer.
int diameter_to_level(const Tiling& t);

// T_k equals the disjoint union of E_{k,i} T_{k-a_i}, E_{k,i} = s^{-k} f_i s^{k-a_i}.
bool tkformula_check(int k, const IfsPtr& ifs);
// Every tile of s^{-1} T_k is a union of tiles of T_{k+1} (address arithmetic).
bool refinement_check(int k, const IfsPtr& ifs);

// The increasing family pi(theta|0), pi(theta|1), ... for an eventually
// periodic theta, produced lazily.
class PrefixFamily {
 public:
  PrefixFamily(IfsPtr ifs, EventuallyPeriodicWord theta) : ifs_(std::move(ifs)), theta_(std::move(theta)) {}

  Tiling at(std::size_t k) const { return pi_prefix(theta_.prefix(k), ifs_); }

  class iterator {
   public:
    using value_type = Tiling;
    using difference_type = std::ptrdiff_t;
    iterator() = default;
    iterator(const PrefixFamily* fam, std::size_t k) : fam_(fam), k_(k) {}
    Tiling operator*() const { return fam_->at(k_); }
    iterator& operator++() {
      ++k_;
      return *this;
    }
    void operator++(int) { ++k_; }
    std::size_t level() const { return k_; }

   private:
    const PrefixFamily* fam_ = nullptr;
    std::size_t k_ = 0;
  };

  iterator begin() const { return iterator(this, 0); }
  std::unreachable_sentinel_t end() const { return {}; }

 private:
  IfsPtr ifs_;
  EventuallyPeriodicWord theta_;
};

}  // namespace blowup
