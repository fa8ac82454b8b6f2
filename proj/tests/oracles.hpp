// Independent reference computations used by the tests.
//
// Nothing here calls omega_level, TileIndex or the tiling constructions; the
// oracles rebuild the same objects from their defining properties so that a
// test compares two separate derivations.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "blowup/geometry.hpp"
#include "blowup/ifs.hpp"
#include "blowup/symbolic.hpp"
#include "blowup/tiling.hpp"

namespace oracle {

using Letters = std::vector<int>;

inline int weight(const Letters& w, const std::vector<int>& a) {
  int e = 0;
  for (int l : w) e += a[l - 1];
  return e;
}

// Every word up to the length bound ceil((k+1)/a_min)+1, filtered by
// e(sigma) > k >= e^-(sigma). Sorted by (length, letters).
inline std::vector<Letters> brute_omega(int k, const std::vector<int>& a) {
  const int n = static_cast<int>(a.size());
  const int amin = *std::min_element(a.begin(), a.end());
  const int bound = (k + 1 + amin - 1) / amin + 1;
  std::vector<Letters> out;
  std::vector<Letters> layer{Letters{}};
  for (int len = 1; len <= bound; ++len) {
    std::vector<Letters> next;
    for (const Letters& w : layer) {
      // Words whose weight already exceeds k cannot have an extension in Omega_k.
      if (weight(w, a) > k) continue;
      for (int l = 1; l <= n; ++l) {
        Letters x = w;
        x.push_back(l);
        next.push_back(x);
      }
    }
    for (const Letters& w : next) {
      Letters head(w.begin(), w.end() - 1);
      if (weight(w, a) > k && k >= weight(head, a)) out.push_back(w);
    }
    layer = std::move(next);
  }
  std::sort(out.begin(), out.end(), [](const Letters& x, const Letters& y) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  });
  return out;
}

// |Omega_k| by conditioning on the first letter.
inline std::uint64_t omega_count_dp(int k, const std::vector<int>& a) {
  std::vector<std::uint64_t> c(static_cast<std::size_t>(k) + 1, 0);
  for (int j = 0; j <= k; ++j)
    for (int ai : a) c[j] += ai > j ? 1 : c[j - ai];
  return c[k];
}

inline std::vector<Letters> to_letters(const blowup::OmegaSet& s) {
  std::vector<Letters> out;
  for (const blowup::Word& w : s) {
    Letters l;
    for (std::size_t i = 0; i < w.size(); ++i) l.push_back(w[i]);
    out.push_back(l);
  }
  return out;
}

// Every word of length `depth` has exactly one prefix in `omega`.
inline bool brute_partition(const std::vector<Letters>& omega, int depth, int n) {
  std::set<Letters> set(omega.begin(), omega.end());
  Letters w(depth, 1);
  while (true) {
    int hits = 0;
    for (int len = 1; len <= depth; ++len)
      if (set.count(Letters(w.begin(), w.begin() + len))) ++hits;
    if (hits != 1) return false;
    int pos = depth - 1;
    while (pos >= 0 && w[pos] == n) w[pos--] = 1;
    if (pos < 0) break;
    ++w[pos];
  }
  return true;
}

// Prefix-free and sum N^-|w| = 1 (exact, scaled by N^depth).
inline bool kraft_partition(const std::vector<Letters>& omega, int n) {
  std::size_t longest = 0;
  for (const Letters& w : omega) longest = std::max(longest, w.size());
  long double total = 0;
  for (const Letters& w : omega) total += std::pow(static_cast<long double>(n), static_cast<long double>(longest - w.size()));
  if (std::abs(total - std::pow(static_cast<long double>(n), static_cast<long double>(longest))) > 0.5L) return false;
  std::vector<Letters> sorted = omega;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    const Letters& x = sorted[i];
    const Letters& y = sorted[i + 1];
    if (x.size() <= y.size() && std::equal(x.begin(), x.end(), y.begin())) return false;
  }
  return true;
}

// PowerVectors with N <= 4, a_i <= 4, gcd 1, and |Omega_12| small enough for
// the brute-force oracle.
inline std::vector<std::vector<int>> random_power_vectors(unsigned seed, int count, std::uint64_t max_size = 60000) {
  std::mt19937 rng(seed);
  std::vector<std::vector<int>> out;
  while (static_cast<int>(out.size()) < count) {
    const int n = std::uniform_int_distribution<int>(2, 4)(rng);
    std::vector<int> a(n);
    for (int& x : a) x = std::uniform_int_distribution<int>(1, 4)(rng);
    int g = 0;
    for (int x : a) g = std::gcd(g, x);
    if (g != 1) continue;
    if (omega_count_dp(12, a) > max_size) continue;
    if (std::find(out.begin(), out.end(), a) != out.end()) continue;
    out.push_back(a);
  }
  return out;
}

// T_k by repeated subdivision: start from s^{-k} and split every piece of
// power <= 0 into its N images. Returns (word, transform) pairs.
inline std::vector<std::pair<Letters, blowup::Similitude>> split_tiling(int k, const blowup::Ifs& ifs) {
  std::vector<std::pair<Letters, blowup::Similitude>> out;
  std::vector<std::pair<Letters, blowup::Similitude>> stack{{Letters{}, blowup::Similitude::scaling(ifs.dim(), ifs.s(), -k)}};
  while (!stack.empty()) {
    auto [w, t] = stack.back();
    stack.pop_back();
    if (t.power() >= 1) {
      out.emplace_back(w, t);
      continue;
    }
    for (int i = 1; i <= ifs.n(); ++i) {
      Letters x = w;
      x.push_back(i);
      stack.emplace_back(x, blowup::compose(t, ifs.map(i)));
    }
  }
  return out;
}

// pi(theta) straight from its definition, without address normalization.
inline std::vector<blowup::Similitude> direct_pi(const std::vector<int>& theta, const blowup::Ifs& ifs) {
  std::vector<int> a = ifs.pv().values();
  blowup::Similitude neg = blowup::Similitude::identity(ifs.dim(), ifs.s());
  for (int l : theta) neg = blowup::compose(neg, blowup::invert(ifs.map(l)));
  std::vector<blowup::Similitude> out;
  for (const Letters& sigma : brute_omega(weight(theta, a), a)) {
    blowup::Similitude t = neg;
    for (int l : sigma) t = blowup::compose(t, ifs.map(l));
    out.push_back(t);
  }
  return out;
}

// ---- geometric comparison by polygon vertex sets -------------------------------------

inline std::vector<blowup::Vec2> vertex_set(const blowup::Ifs& ifs, const blowup::Similitude& t) {
  std::vector<blowup::Vec2> v;
  for (const blowup::Vec2& x : ifs.geom().polygon.v) v.push_back(t.apply2(x));
  std::sort(v.begin(), v.end(), [](const blowup::Vec2& p, const blowup::Vec2& q) {
    return p.x() != q.x() ? p.x() < q.x() : p.y() < q.y();
  });
  return v;
}

inline bool same_vertex_set(const std::vector<blowup::Vec2>& a, const std::vector<blowup::Vec2>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (const blowup::Vec2& p : a) {
    bool hit = false;
    for (const blowup::Vec2& q : b)
      if ((p - q).norm() <= tol) {
        hit = true;
        break;
      }
    if (!hit) return false;
  }
  return true;
}

struct PolygonBag {
  std::vector<std::vector<blowup::Vec2>> verts;
  std::vector<blowup::Vec2> centre;
  std::vector<std::size_t> by_x;  // indices sorted by centre x
};

inline PolygonBag bag_of(const blowup::Ifs& ifs, const std::vector<blowup::Similitude>& ts) {
  PolygonBag b;
  for (const auto& t : ts) {
    b.verts.push_back(vertex_set(ifs, t));
    blowup::Vec2 c(0, 0);
    for (const auto& p : b.verts.back()) c += p;
    b.centre.push_back(c / static_cast<double>(b.verts.back().size()));
  }
  b.by_x.resize(ts.size());
  std::iota(b.by_x.begin(), b.by_x.end(), std::size_t{0});
  std::sort(b.by_x.begin(), b.by_x.end(), [&](std::size_t i, std::size_t j) { return b.centre[i].x() < b.centre[j].x(); });
  return b;
}

// Indices of polygons in `b` with the same vertex set as `v`.
inline std::vector<std::size_t> matches(const PolygonBag& b, const std::vector<blowup::Vec2>& v, double tol) {
  blowup::Vec2 c(0, 0);
  for (const auto& p : v) c += p;
  c /= static_cast<double>(v.size());
  auto lo = std::lower_bound(b.by_x.begin(), b.by_x.end(), c.x() - tol,
                             [&](std::size_t i, double x) { return b.centre[i].x() < x; });
  std::vector<std::size_t> out;
  for (auto it = lo; it != b.by_x.end() && b.centre[*it].x() <= c.x() + tol; ++it)
    if ((b.centre[*it] - c).norm() <= tol && same_vertex_set(v, b.verts[*it], tol)) out.push_back(*it);
  return out;
}

// Equal as sets of polygons (one-to-one matching of vertex sets).
inline bool same_polygons(const blowup::Ifs& ifs, const std::vector<blowup::Similitude>& a,
                          const std::vector<blowup::Similitude>& b, double tol = 1e-6) {
  if (a.size() != b.size()) return false;
  PolygonBag bb = bag_of(ifs, b);
  std::vector<bool> used(b.size(), false);
  for (const auto& t : a) {
    bool hit = false;
    for (std::size_t j : matches(bb, vertex_set(ifs, t), tol))
      if (!used[j]) {
        used[j] = hit = true;
        break;
      }
    if (!hit) return false;
  }
  return true;
}

inline std::vector<blowup::Similitude> transforms(const blowup::Tiling& t) {
  std::vector<blowup::Similitude> out;
  for (const blowup::Tile& tile : t.tiles()) out.push_back(tile.transform);
  return out;
}

// Every polygon of `a` appears among the polygons of `b`.
inline bool polygons_subset(const blowup::Ifs& ifs, const std::vector<blowup::Similitude>& a,
                            const std::vector<blowup::Similitude>& b, double tol = 1e-6) {
  PolygonBag bb = bag_of(ifs, b);
  for (const auto& t : a)
    if (matches(bb, vertex_set(ifs, t), tol).empty()) return false;
  return true;
}

// Area of a polygon by midpoint sampling on an n x n grid over its box.
inline double grid_area(const blowup::Polygon& p, int n) {
  blowup::BBox b = blowup::BBox::of(p.v);
  const double dx = (b.hi.x() - b.lo.x()) / n, dy = (b.hi.y() - b.lo.y()) / n;
  long inside = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (blowup::point_in_polygon(p, {b.lo.x() + (i + 0.5) * dx, b.lo.y() + (j + 0.5) * dy})) ++inside;
  return static_cast<double>(inside) * dx * dy;
}

}  // namespace oracle
