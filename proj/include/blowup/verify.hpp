// Numeric verification of tilings: overlaps, self-similarity of eventually
// periodic prefix tilings, repetition of patches, the injectivity
// precondition, and an approximate tiling distance.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blowup/tiling.hpp"

namespace blowup {

struct OverlapReport {
  bool pass = true;
  bool authoritative = true;  // false in point-cloud mode
  double max_overlap = 0;     // polygon mode: largest pairwise area
  double threshold = 0;
  std::optional<std::pair<std::size_t, std::size_t>> worst_pair;
  double min_separation = 0;  // point-cloud mode: closest points of distinct tiles
};

// Pairwise intersection areas with a bounding-box sweep; passes when every
// pair is at most 1e-9 area(A) s^{2 a_max}.
OverlapReport nonoverlap_check(const Tiling& t);

struct SelfSimilarityReport {
  bool ok = true;
  Similitude psi;
  int core_prefix = 0;    // K_c: core is pi(theta|K_c)
  int target_prefix = 0;  // K_c + |beta|
  // For each core tile: the tiles of pi(theta|K) whose union is psi(tile).
  std::vector<std::vector<std::size_t>> decomposition;
  std::optional<std::size_t> failed_tile;
};

// theta = alpha beta beta beta ...; psi = f_{-alpha} f_{-beta} f_{-alpha}^{-1}.
// Checks that psi maps every tile of the core pi(theta|K_c), K_c = |alpha| +
// j |beta| the largest such value with K_c + |beta| <= K, onto a union of
// tiles of pi(theta|K).
SelfSimilarityReport self_similarity_check(const Word& alpha, const Word& beta, int K, const IfsPtr& ifs);

struct QuasiReport {
  bool found = false;
  double radius = 0;  // covering radius over the core window
  std::vector<Similitude> copies;
  std::size_t core_centres = 0;
};

// Isometric copies of `p` inside `t`, and the smallest R such that every
// ball of radius R centred at a core tile anchor contains a whole copy. The
// core window is the ball of a quarter of the support diameter around the
// support centre.
QuasiReport quasiperiodicity_probe(const Tiling& p, const Tiling& t);

struct InjectivityReport {
  bool holds = false;
  bool conclusive = true;
  struct Pair {
    int i = 0;
    int j = 0;
    std::size_t common = 0;
    double common_area = 0;
    double intersection_area = 0;
    double uncovered_fraction = 0;
    bool tiles_intersection = false;
  };
  std::vector<Pair> pairs;
};

// True when, for every i != j, the common tiles of pi(i) and pi(j) do not
// tile the intersection of their supports.
InjectivityReport injectivity_precondition(const IfsPtr& ifs);

struct DistanceReport {
  double distance = 0;
  double resolution = 0;  // spacing of consecutive boundary samples on the sphere
};

// Boundary points of all tiles, `samples` in total spaced by arc length, are
// sent to the sphere of diameter 1 tangent to the plane at the origin by
// inverse stereographic projection; returns the symmetric Hausdorff distance
// in the sphere's geodesic metric.
DistanceReport tiling_distance(const Tiling& a, const Tiling& b, std::size_t samples);

}  // namespace blowup
