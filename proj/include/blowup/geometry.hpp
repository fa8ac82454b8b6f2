// Similitude algebra and planar polygon utilities.
//
// A Similitude is x -> s^p O x + q. The base ratio s is shared by every map
// of one IFS; the scale of a map is never stored as a free float, only as the
// integer power p. Polygon routines (area, clipping, point tests) are planar.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <vector>

namespace blowup {

// Dimension is a runtime value bounded by 3; storage is inline.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 3, 3>;
using Vec2 = Eigen::Vector2d;

inline constexpr double kAlgebraTol = 1e-9;
inline constexpr double kMatchTol = 1e-6;

class Similitude {
 public:
  Similitude(int power, Mat ortho, Vec trans, double base);

  static Similitude identity(int dim, double base);
  // Pure scaling x -> s^power x about the origin.
  static Similitude scaling(int dim, double base, int power);
  static Similitude translation(const Vec& t, double base);

  int dim() const { return static_cast<int>(trans_.size()); }
  int power() const { return power_; }
  double base() const { return base_; }
  double scale() const;  // s^power, derived on demand
  const Mat& ortho() const { return ortho_; }
  const Vec& trans() const { return trans_; }
  Mat linear() const { return scale() * ortho_; }

  Vec apply(const Vec& x) const;
  Vec2 apply2(const Vec2& x) const;

  // (*this) o g
  Similitude compose(const Similitude& g) const;
  Similitude inverse() const;

  bool is_identity(double tol = kAlgebraTol) const;
  bool is_isometry() const { return power_ == 0; }
  bool has_reflection() const { return ortho_.determinant() < 0; }

  // Same power, ortho and translation entrywise within tol.
  bool approx_equal(const Similitude& other, double tol) const;

 private:
  int power_;
  Mat ortho_;
  Vec trans_;
  double base_;
};

Similitude compose(const Similitude& f, const Similitude& g);
Similitude invert(const Similitude& f);

bool is_orthogonal(const Mat& m, double tol = kAlgebraTol);

// ---- planar polygons -------------------------------------------------------

struct Polygon {
  std::vector<Vec2> v;
};

struct BBox {
  Vec2 lo{0, 0};
  Vec2 hi{0, 0};
  bool overlaps(const BBox& o, double pad = 0) const;
  bool contains(const Vec2& p, double pad = 0) const;
  void expand(const Vec2& p);
  static BBox of(const std::vector<Vec2>& pts);
};

double signed_area(const Polygon& p);
double polygon_area(const Polygon& p);
Vec2 polygon_centroid(const Polygon& p);
double polygon_diameter(const std::vector<Vec2>& pts);
bool is_simple_polygon(const Polygon& p);
// Drops vertices lying on the segment between their neighbours.
Polygon remove_collinear(const Polygon& p, double tol = 1e-12);
Polygon ensure_ccw(Polygon p);

// Strictly inside: false on the boundary (within tol).
bool point_strictly_inside(const Polygon& p, const Vec2& x, double tol = 1e-9);
bool point_in_polygon(const Polygon& p, const Vec2& x);  // closed set
double distance_to_polygon(const Polygon& p, const Vec2& x);  // 0 inside

using Triangle = std::array<Vec2, 3>;
std::vector<Triangle> triangulate(const Polygon& p);  // ear clipping

double convex_clip_area(const std::vector<Vec2>& subject, const std::vector<Vec2>& clip);
double triangles_overlap_area(const std::vector<Triangle>& a, const std::vector<Triangle>& b);

// Area of P n Q for simple polygons. Throws PreconditionError on degenerate input.
double polygon_clip_area(const Polygon& p, const Polygon& q);

std::vector<Vec2> convex_hull(std::vector<Vec2> pts);

// Isometries mapping the polygon onto itself (vertex-sequence automorphisms,
// both orientations). Always contains the identity.
std::vector<Similitude> polygon_symmetries(const Polygon& p, double base, double tol = 1e-9);

}  // namespace blowup
