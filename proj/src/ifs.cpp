#include "blowup/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blowup/errors.hpp"

namespace blowup {

double eval_polynomial(const std::vector<double>& coeffs, double x) {
  double acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double refine_root(const std::vector<double>& coeffs, double guess,
                   std::optional<std::pair<double, double>> bracket) {
  if (coeffs.size() < 2) throw ConfigError("defining polynomial must have degree >= 1");
  auto [lo, hi] = bracket.value_or(std::pair{0.0, 1.0});
  double flo = eval_polynomial(coeffs, lo), fhi = eval_polynomial(coeffs, hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo > 0) == (fhi > 0)) throw ConfigError("polynomial does not change sign on the bracket");
  std::vector<double> deriv;
  for (std::size_t i = 1; i < coeffs.size(); ++i) deriv.push_back(static_cast<double>(i) * coeffs[i]);
  double x = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    double fx = eval_polynomial(coeffs, x);
    if (fx == 0) return x;
    if ((fx > 0) == (flo > 0))
      lo = x, flo = fx;
    else
      hi = x;
    double d = eval_polynomial(deriv, x);
    double next = d != 0 ? x - fx / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 4 * std::numeric_limits<double>::epsilon() * std::abs(x)) {
      x = next;
      break;
    }
    x = next;
  }
  // Settle on the neighbouring double with the smallest residual so that
  // refining an already refined value returns it unchanged.
  double best = x, best_f = std::abs(eval_polynomial(coeffs, x));
  double y = x;
  for (int i = 0; i < 3; ++i) y = std::nextafter(y, -1.0);
  for (int i = 0; i < 7; ++i, y = std::nextafter(y, 2.0)) {
    double fy = std::abs(eval_polynomial(coeffs, y));
    if (fy < best_f || (fy == best_f && y < best)) best = y, best_f = fy;
  }
  return best;
}

PowerVector IfsSpec::pv() const {
  std::vector<int> a;
  for (const Similitude& f : maps) a.push_back(f.power());
  return PowerVector(std::move(a));
}

Vec fixed_point(const Similitude& f) {
  Mat a = Mat::Identity(f.dim(), f.dim()) - f.linear();
  return a.fullPivLu().solve(f.trans());
}

AttractorGeom attractor(const IfsSpec& spec, int depth) {
  AttractorGeom g;
  g.kind = spec.mode;
  if (spec.mode == AttractorKind::ExactPolygon) {
    if (spec.dim != 2) throw ConfigError("exact polygon attractors are planar only");
    if (!is_simple_polygon(spec.polygon)) throw ConfigError("attractor polygon is not closed and simple");
    g.polygon = spec.polygon;
    g.area = polygon_area(spec.polygon);
    BBox b = BBox::of(spec.polygon.v);
    g.lo = Vec(2);
    g.hi = Vec(2);
    g.lo << b.lo.x(), b.lo.y();
    g.hi << b.hi.x(), b.hi.y();
    return g;
  }
  if (depth < 0) throw PreconditionError("point cloud depth must be nonnegative");
  double count = std::pow(static_cast<double>(spec.maps.size()), depth);
  if (count > 2e6) throw ConfigError("point cloud depth too large");
  std::vector<Vec> pts{fixed_point(spec.maps.front())};
  for (int d = 0; d < depth; ++d) {
    std::vector<Vec> next;
    next.reserve(pts.size() * spec.maps.size());
    // f_{w i}(x0) for every word w, in lexicographic order of (w, i).
    for (const Similitude& f : spec.maps)
      for (const Vec& p : pts) next.push_back(f.apply(p));
    pts = std::move(next);
  }
  g.points = std::move(pts);
  g.lo = g.points.front();
  g.hi = g.points.front();
  for (const Vec& p : g.points) {
    g.lo = g.lo.cwiseMin(p);
    g.hi = g.hi.cwiseMax(p);
  }
  return g;
}

Ifs::Ifs(IfsSpec spec) : spec_(std::move(spec)), pv_(spec_.pv()) {}

std::shared_ptr<const Ifs> Ifs::build(IfsSpec spec) {
  if (spec.dim < 1 || spec.dim > 3) throw ConfigError("dimension must be 1, 2 or 3");
  if (!spec.s.polynomial.empty()) spec.s.value = refine_root(spec.s.polynomial, spec.s.value, spec.s.bracket);
  const double s = spec.s.value;
  if (!(s > 0 && s < 1)) throw ConfigError("base ratio s must lie in (0,1)");
  if (spec.maps.size() < 2) throw ConfigError("an IFS needs at least two maps");
  std::vector<Similitude> maps;
  for (std::size_t i = 0; i < spec.maps.size(); ++i) {
    const Similitude& f = spec.maps[i];
    if (f.dim() != spec.dim) throw ConfigError("map " + std::to_string(i + 1) + " has the wrong dimension");
    if (f.power() < 1) throw ConfigError("map " + std::to_string(i + 1) + " is not contractive (a_i < 1)");
    if (!is_orthogonal(f.ortho())) throw ConfigError("map " + std::to_string(i + 1) + " is not a similitude (O not orthogonal)");
    // Rebase onto the refined s so every composition sees one ratio.
    maps.emplace_back(f.power(), f.ortho(), f.trans(), s);
  }
  spec.maps = std::move(maps);

  auto ifs = std::shared_ptr<Ifs>(new Ifs(std::move(spec)));
  ifs->geom_ = attractor(ifs->spec_, ifs->spec_.cloud_depth);
  if (ifs->polygon_mode()) {
    const Polygon& poly = ifs->geom_.polygon;
    ifs->triangles_ = triangulate(poly);
    ifs->symmetries_ = polygon_symmetries(poly, s);
    ifs->diameter_ = polygon_diameter(poly.v);
    Vec2 c = polygon_centroid(poly);
    if (!point_strictly_inside(poly, c, 1e-9 * ifs->diameter_)) {
      if (ifs->symmetries_.size() > 1)
        throw ConfigError("symmetric attractor whose centroid is not interior is unsupported");
      // Any interior point serves when the only self-map is the identity.
      const Triangle* best = &ifs->triangles_.front();
      double best_area = 0;
      for (const Triangle& t : ifs->triangles_) {
        double a = polygon_area(Polygon{{t[0], t[1], t[2]}});
        if (a > best_area) best_area = a, best = &t;
      }
      c = ((*best)[0] + (*best)[1] + (*best)[2]) / 3.0;
    }
    ifs->anchor_ = Vec(2);
    ifs->anchor_ << c.x(), c.y();
  } else {
    ifs->symmetries_ = {ifs->identity()};
    ifs->anchor_ = fixed_point(ifs->spec_.maps.front());
    double d = 0;
    const auto& pts = ifs->geom_.points;
    if (ifs->dim() == 2) {
      std::vector<Vec2> p2;
      for (const Vec& p : pts) p2.emplace_back(p(0), p(1));
      d = polygon_diameter(p2);
    } else {
      for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, (pts[i] - pts[j]).norm());
    }
    ifs->diameter_ = d;
  }
  return ifs;
}

double Ifs::measure_sum() const {
  double sum = 0;
  for (const Similitude& f : spec_.maps) sum += std::pow(s(), dim() * f.power());
  return sum;
}

Similitude word_map(const Word& theta, const Ifs& ifs) {
  validate_word(theta, ifs.pv());
  Similitude f = ifs.identity();
  for (std::size_t i = 0; i < theta.size(); ++i) f = f.compose(ifs.map(theta[i]));
  return f;
}

Similitude neg_word_map(const Word& theta, const Ifs& ifs) {
  validate_word(theta, ifs.pv());
  Similitude f = ifs.identity();
  for (std::size_t i = 0; i < theta.size(); ++i) f = f.compose(ifs.map(theta[i]).inverse());
  return f;
}

}  // namespace blowup
