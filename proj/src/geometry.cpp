#include "blowup/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "blowup/errors.hpp"

namespace blowup {

Similitude::Similitude(int power, Mat ortho, Vec trans, double base)
    : power_(power), ortho_(std::move(ortho)), trans_(std::move(trans)), base_(base) {
  if (ortho_.rows() != ortho_.cols() || ortho_.rows() != trans_.size())
    throw DimensionMismatch("orthogonal part and translation disagree on dimension");
  if (trans_.size() < 1 || trans_.size() > 3) throw DimensionMismatch("dimension must be 1, 2 or 3");
  if (!(base_ > 0.0 && base_ < 1.0)) throw ConfigError("base ratio must lie in (0,1)");
}

Similitude Similitude::identity(int dim, double base) {
  return Similitude(0, Mat::Identity(dim, dim), Vec::Zero(dim), base);
}

Similitude Similitude::scaling(int dim, double base, int power) {
  return Similitude(power, Mat::Identity(dim, dim), Vec::Zero(dim), base);
}

Similitude Similitude::translation(const Vec& t, double base) {
  return Similitude(0, Mat::Identity(t.size(), t.size()), t, base);
}

double Similitude::scale() const { return std::pow(base_, power_); }

Vec Similitude::apply(const Vec& x) const {
  if (x.size() != trans_.size()) throw DimensionMismatch("point dimension does not match map");
  return scale() * (ortho_ * x) + trans_;
}

Vec2 Similitude::apply2(const Vec2& x) const {
  const double k = scale();
  return Vec2(k * (ortho_(0, 0) * x.x() + ortho_(0, 1) * x.y()) + trans_(0),
              k * (ortho_(1, 0) * x.x() + ortho_(1, 1) * x.y()) + trans_(1));
}

Similitude Similitude::compose(const Similitude& g) const {
  if (g.dim() != dim()) throw DimensionMismatch("cannot compose maps of different dimension");
  if (std::abs(g.base_ - base_) > 1e-12 * base_)
    throw PreconditionError("cannot compose maps with different base ratios");
  Vec t = scale() * (ortho_ * g.trans_) + trans_;
  return Similitude(power_ + g.power_, ortho_ * g.ortho_, std::move(t), base_);
}

Similitude Similitude::inverse() const {
  Mat ot = ortho_.transpose();
  Vec t = -(std::pow(base_, -power_) * (ot * trans_));
  return Similitude(-power_, std::move(ot), std::move(t), base_);
}

bool Similitude::is_identity(double tol) const {
  return power_ == 0 && (ortho_ - Mat::Identity(dim(), dim())).cwiseAbs().maxCoeff() <= tol &&
         trans_.cwiseAbs().maxCoeff() <= tol;
}

bool Similitude::approx_equal(const Similitude& other, double tol) const {
  return power_ == other.power_ && dim() == other.dim() &&
         (ortho_ - other.ortho_).cwiseAbs().maxCoeff() <= tol &&
         (trans_ - other.trans_).cwiseAbs().maxCoeff() <= tol;
}

Similitude compose(const Similitude& f, const Similitude& g) { return f.compose(g); }
Similitude invert(const Similitude& f) { return f.inverse(); }

bool is_orthogonal(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m * m.transpose() - Mat::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

// ---- polygons ----------------------------------------------------------------

namespace {

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

double segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  Vec2 ab = b - a;
  double len2 = ab.squaredNorm();
  double t = len2 > 0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (a + t * ab - p).norm();
}

int orient(const Vec2& a, const Vec2& b, const Vec2& c, double eps) {
  double v = cross(a, b, c);
  return v > eps ? 1 : (v < -eps ? -1 : 0);
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p, double eps) {
  return segment_distance(p, a, b) <= eps;
}

bool segments_touch(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d, double eps) {
  int o1 = orient(a, b, c, eps), o2 = orient(a, b, d, eps);
  int o3 = orient(c, d, a, eps), o4 = orient(c, d, b, eps);
  if (o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0) return true;
  return on_segment(a, b, c, eps) || on_segment(a, b, d, eps) || on_segment(c, d, a, eps) ||
         on_segment(c, d, b, eps);
}

}  // namespace

bool BBox::overlaps(const BBox& o, double pad) const {
  return lo.x() <= o.hi.x() + pad && o.lo.x() <= hi.x() + pad && lo.y() <= o.hi.y() + pad &&
         o.lo.y() <= hi.y() + pad;
}

bool BBox::contains(const Vec2& p, double pad) const {
  return p.x() >= lo.x() - pad && p.x() <= hi.x() + pad && p.y() >= lo.y() - pad && p.y() <= hi.y() + pad;
}

void BBox::expand(const Vec2& p) {
  lo = lo.cwiseMin(p);
  hi = hi.cwiseMax(p);
}

BBox BBox::of(const std::vector<Vec2>& pts) {
  BBox b;
  if (pts.empty()) return b;
  b.lo = b.hi = pts.front();
  for (const Vec2& p : pts) b.expand(p);
  return b;
}

double signed_area(const Polygon& p) {
  double a = 0;
  const std::size_t n = p.v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& u = p.v[i];
    const Vec2& w = p.v[(i + 1) % n];
    a += u.x() * w.y() - w.x() * u.y();
  }
  return 0.5 * a;
}

double polygon_area(const Polygon& p) { return std::abs(signed_area(p)); }

Vec2 polygon_centroid(const Polygon& p) {
  double a = 0;
  Vec2 c(0, 0);
  const std::size_t n = p.v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& u = p.v[i];
    const Vec2& w = p.v[(i + 1) % n];
    double k = u.x() * w.y() - w.x() * u.y();
    a += k;
    c += k * (u + w);
  }
  if (std::abs(a) < 1e-300) throw PreconditionError("centroid of a zero-area polygon");
  return c / (3.0 * a);
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Vec2> h(2 * pts.size());
  std::size_t k = 0;
  for (const Vec2& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

double polygon_diameter(const std::vector<Vec2>& pts) {
  std::vector<Vec2> h = convex_hull(pts);
  double d = 0;
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t j = i + 1; j < h.size(); ++j) d = std::max(d, (h[i] - h[j]).norm());
  return d;
}

bool is_simple_polygon(const Polygon& p) {
  const std::size_t n = p.v.size();
  if (n < 3) return false;
  const double scale = std::max(1.0, polygon_diameter(p.v));
  const double eps = 1e-12 * scale;
  if (polygon_area(p) <= eps * scale) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if ((p.v[i] - p.v[(i + 1) % n]).norm() <= eps) return false;  // repeated vertex
    for (std::size_t j = i + 1; j < n; ++j) {
      bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      const Vec2 &a = p.v[i], &b = p.v[(i + 1) % n], &c = p.v[j], &d = p.v[(j + 1) % n];
      if (adjacent) {
        // Adjacent edges may only share their common endpoint.
        const Vec2& shared = (j == i + 1) ? b : a;
        const Vec2& other_a = (j == i + 1) ? a : b;
        const Vec2& other_c = (j == i + 1) ? d : c;
        if (orient(shared, other_a, other_c, eps) == 0 && (other_a - shared).dot(other_c - shared) > 0)
          return false;  // folds back on itself
        continue;
      }
      if (segments_touch(a, b, c, d, eps)) return false;
    }
  }
  return true;
}

Polygon remove_collinear(const Polygon& p, double tol) {
  Polygon out;
  const std::size_t n = p.v.size();
  const double scale = std::max(1.0, polygon_diameter(p.v));
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& prev = p.v[(i + n - 1) % n];
    const Vec2& next = p.v[(i + 1) % n];
    if (std::abs(cross(prev, p.v[i], next)) > tol * scale * scale) out.v.push_back(p.v[i]);
  }
  return out;
}

Polygon ensure_ccw(Polygon p) {
  if (signed_area(p) < 0) std::reverse(p.v.begin(), p.v.end());
  return p;
}

bool point_in_polygon(const Polygon& p, const Vec2& x) {
  const std::size_t n = p.v.size();
  for (std::size_t i = 0; i < n; ++i)
    if (segment_distance(x, p.v[i], p.v[(i + 1) % n]) <= 1e-12) return true;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 &a = p.v[i], &b = p.v[j];
    if ((a.y() > x.y()) != (b.y() > x.y())) {
      double xi = (b.x() - a.x()) * (x.y() - a.y()) / (b.y() - a.y()) + a.x();
      if (x.x() < xi) inside = !inside;
    }
  }
  return inside;
}

bool point_strictly_inside(const Polygon& p, const Vec2& x, double tol) {
  const std::size_t n = p.v.size();
  for (std::size_t i = 0; i < n; ++i)
    if (segment_distance(x, p.v[i], p.v[(i + 1) % n]) <= tol) return false;
  return point_in_polygon(p, x);
}

double distance_to_polygon(const Polygon& p, const Vec2& x) {
  if (point_in_polygon(p, x)) return 0.0;
  double d = std::numeric_limits<double>::infinity();
  const std::size_t n = p.v.size();
  for (std::size_t i = 0; i < n; ++i) d = std::min(d, segment_distance(x, p.v[i], p.v[(i + 1) % n]));
  return d;
}

std::vector<Triangle> triangulate(const Polygon& poly) {
  Polygon p = ensure_ccw(remove_collinear(poly));
  std::vector<Triangle> out;
  std::vector<std::size_t> idx(p.v.size());
  std::iota(idx.begin(), idx.end(), 0);
  const double eps = 1e-14 * std::max(1.0, polygon_area(p));
  std::size_t guard = 0;
  while (idx.size() > 3) {
    bool clipped = false;
    const std::size_t m = idx.size();
    for (std::size_t i = 0; i < m; ++i) {
      const Vec2& a = p.v[idx[(i + m - 1) % m]];
      const Vec2& b = p.v[idx[i]];
      const Vec2& c = p.v[idx[(i + 1) % m]];
      if (cross(a, b, c) <= eps) continue;  // reflex or flat
      bool empty = true;
      for (std::size_t j = 0; j < m && empty; ++j) {
        if (j == i || j == (i + 1) % m || j == (i + m - 1) % m) continue;
        const Vec2& q = p.v[idx[j]];
        if (cross(a, b, q) >= -eps && cross(b, c, q) >= -eps && cross(c, a, q) >= -eps) empty = false;
      }
      if (!empty) continue;
      out.push_back({a, b, c});
      idx.erase(idx.begin() + static_cast<long>(i));
      clipped = true;
      break;
    }
    if (!clipped || ++guard > 10000) throw PreconditionError("polygon could not be triangulated (not simple?)");
  }
  if (idx.size() == 3) out.push_back({p.v[idx[0]], p.v[idx[1]], p.v[idx[2]]});
  return out;
}

double convex_clip_area(const std::vector<Vec2>& subject, const std::vector<Vec2>& clip) {
  // Sutherland-Hodgman; both inputs counter-clockwise.
  std::vector<Vec2> out = subject;
  const std::size_t n = clip.size();
  for (std::size_t e = 0; e < n && !out.empty(); ++e) {
    const Vec2& a = clip[e];
    const Vec2& b = clip[(e + 1) % n];
    std::vector<Vec2> in = std::move(out);
    out.clear();
    for (std::size_t i = 0; i < in.size(); ++i) {
      const Vec2& cur = in[i];
      const Vec2& prev = in[(i + in.size() - 1) % in.size()];
      double dc = cross(a, b, cur), dp = cross(a, b, prev);
      if (dc >= 0) {
        if (dp < 0) out.push_back(prev + (cur - prev) * (dp / (dp - dc)));
        out.push_back(cur);
      } else if (dp >= 0) {
        out.push_back(prev + (cur - prev) * (dp / (dp - dc)));
      }
    }
  }
  if (out.size() < 3) return 0.0;
  return std::max(0.0, signed_area(Polygon{out}));
}

double triangles_overlap_area(const std::vector<Triangle>& a, const std::vector<Triangle>& b) {
  double total = 0;
  for (const Triangle& ta : a) {
    std::vector<Vec2> sa(ta.begin(), ta.end());
    if (cross(sa[0], sa[1], sa[2]) < 0) std::swap(sa[1], sa[2]);
    BBox ba = BBox::of(sa);
    for (const Triangle& tb : b) {
      std::vector<Vec2> sb(tb.begin(), tb.end());
      if (!ba.overlaps(BBox::of(sb))) continue;
      if (cross(sb[0], sb[1], sb[2]) < 0) std::swap(sb[1], sb[2]);
      total += convex_clip_area(sa, sb);
    }
  }
  return total;
}

double polygon_clip_area(const Polygon& p, const Polygon& q) {
  if (polygon_area(p) <= 0 || polygon_area(q) <= 0) throw PreconditionError("degenerate polygon in clip");
  if (!BBox::of(p.v).overlaps(BBox::of(q.v))) return 0.0;
  return triangles_overlap_area(triangulate(p), triangulate(q));
}

std::vector<Similitude> polygon_symmetries(const Polygon& poly, double base, double tol) {
  Polygon p = remove_collinear(poly);
  const std::size_t n = p.v.size();
  const double scale = std::max(1.0, polygon_diameter(p.v));
  std::vector<Similitude> out{Similitude::identity(2, base)};
  Vec2 cv(0, 0);
  for (const Vec2& x : p.v) cv += x;
  cv /= static_cast<double>(n);
  for (int dir : {1, -1}) {
    for (std::size_t r = 0; r < n; ++r) {
      std::vector<Vec2> w(n);
      for (std::size_t i = 0; i < n; ++i)
        w[i] = p.v[dir > 0 ? (r + i) % n : (r + n - i) % n];
      Vec2 cw(0, 0);
      for (const Vec2& x : w) cw += x;
      cw /= static_cast<double>(n);
      Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
      for (std::size_t i = 0; i < n; ++i) h += (p.v[i] - cv) * (w[i] - cw).transpose();
      Eigen::JacobiSVD<Eigen::Matrix2d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
      Eigen::Matrix2d o = svd.matrixV() * svd.matrixU().transpose();
      Vec2 q = cw - o * cv;
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i) ok = (o * p.v[i] + q - w[i]).norm() <= tol * scale;
      if (!ok) continue;
      Mat om(2, 2);
      om << o(0, 0), o(0, 1), o(1, 0), o(1, 1);
      Vec qv(2);
      qv << q.x(), q.y();
      Similitude g(0, om, qv, base);
      bool seen = std::any_of(out.begin(), out.end(), [&](const Similitude& s) { return s.approx_equal(g, 1e-7); });
      if (!seen) out.push_back(g);
    }
  }
  return out;
}

}  // namespace blowup
