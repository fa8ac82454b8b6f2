// IFS definition and the attractor geometry derived from it.

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blowup/geometry.hpp"
#include "blowup/symbolic.hpp"

namespace blowup {

enum class AttractorKind { ExactPolygon, PointCloud };

// The base ratio s, optionally pinned down as a root of a polynomial.
struct BaseRatio {
  double value = 0.5;
  std::vector<double> polynomial;  // ascending coefficients, empty if none
  std::optional<std::pair<double, double>> bracket;
};

// Newton iteration safeguarded by bisection inside `bracket` (default (0,1)).
double refine_root(const std::vector<double>& coeffs, double guess,
                   std::optional<std::pair<double, double>> bracket = std::nullopt);
double eval_polynomial(const std::vector<double>& coeffs, double x);

struct IfsSpec {
  std::string name;
  int dim = 2;
  BaseRatio s;
  std::vector<Similitude> maps;  // map i has power a_i
  AttractorKind mode = AttractorKind::ExactPolygon;
  Polygon polygon;      // ExactPolygon only
  int cloud_depth = 6;  // PointCloud only

  PowerVector pv() const;
};

struct AttractorGeom {
  AttractorKind kind = AttractorKind::ExactPolygon;
  Polygon polygon;
  std::vector<Vec> points;
  Vec lo;
  Vec hi;
  double area = 0;  // polygon kind only
};

// Polygon mode: the configured polygon verbatim. Point-cloud mode: the images
// f_w(x0) over all words of length `depth`, x0 the fixed point of f_1.
AttractorGeom attractor(const IfsSpec& spec, int depth);

Vec fixed_point(const Similitude& f);

// A validated spec plus everything derived from it once: attractor geometry,
// its triangulation, its isometric self-maps and a reference point that every
// self-map fixes. Tilings hold a shared pointer to one of these.
class Ifs {
 public:
  static std::shared_ptr<const Ifs> build(IfsSpec spec);

  const IfsSpec& spec() const { return spec_; }
  const PowerVector& pv() const { return pv_; }
  double s() const { return spec_.s.value; }
  int dim() const { return spec_.dim; }
  int n() const { return static_cast<int>(spec_.maps.size()); }
  int a_max() const { return pv_.a_max(); }
  const Similitude& map(int letter) const { return spec_.maps[letter - 1]; }
  bool polygon_mode() const { return spec_.mode == AttractorKind::ExactPolygon; }

  const AttractorGeom& geom() const { return geom_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<Similitude>& symmetries() const { return symmetries_; }
  const Vec& anchor() const { return anchor_; }
  double diameter() const { return diameter_; }

  Similitude identity() const { return Similitude::identity(dim(), s()); }
  Similitude scaling(int power) const { return Similitude::scaling(dim(), s(), power); }

  // Sum of s^{M a_i}; equals 1 when the attractor pieces fill it exactly.
  double measure_sum() const;

 private:
  explicit Ifs(IfsSpec spec);

  IfsSpec spec_;
  PowerVector pv_;
  AttractorGeom geom_;
  std::vector<Triangle> triangles_;
  std::vector<Similitude> symmetries_;
  Vec anchor_;
  double diameter_ = 0;
};

using IfsPtr = std::shared_ptr<const Ifs>;

// f_theta = f_{theta_1} o ... o f_{theta_k}; identity for the empty word.
Similitude word_map(const Word& theta, const Ifs& ifs);
// f_{-theta} = f_{theta_1}^{-1} o ... o f_{theta_k}^{-1}.
Similitude neg_word_map(const Word& theta, const Ifs& ifs);

}  // namespace blowup
