#include "blowup/io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>

#include "blowup/errors.hpp"

namespace blowup {

using nlohmann::json;

namespace {

Mat mat2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

Mat rotation(double degrees, bool reflect) {
  const double r = degrees * std::numbers::pi / 180.0;
  Mat m = mat2(std::cos(r), -std::sin(r), std::sin(r), std::cos(r));
  if (reflect) m.col(1) *= -1;  // R(theta) diag(1,-1)
  return m;
}

IfsSpec golden_b() {
  IfsSpec spec;
  spec.name = "goldenb";
  spec.dim = 2;
  spec.s.polynomial = {-1, 0, 1, 0, 1};  // x^4 + x^2 - 1
  spec.s.bracket = std::pair{0.0, 1.0};
  const double s = refine_root(spec.s.polynomial, 0.786, spec.s.bracket);
  spec.s.value = s;
  spec.maps.emplace_back(1, mat2(0, 1, -1, 0), vec2(0, s), s);
  spec.maps.emplace_back(2, mat2(-1, 0, 0, 1), vec2(1, 0), s);
  const double s2 = s * s, s3 = s2 * s;
  spec.polygon.v = {{0, 0}, {1, 0}, {1, s3}, {s2, s3}, {s2, s}, {0, s}};
  return spec;
}

IfsSpec square4() {
  IfsSpec spec;
  spec.name = "square4";
  spec.dim = 2;
  spec.s.value = 0.5;
  const Mat id = Mat::Identity(2, 2);
  for (auto [x, y] : std::array<std::pair<double, double>, 4>{{{0, 0}, {0.5, 0}, {0, 0.5}, {0.5, 0.5}}})
    spec.maps.emplace_back(1, id, vec2(x, y), 0.5);
  spec.polygon.v = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  return spec;
}

IfsSpec cantor() {
  IfsSpec spec;
  spec.name = "cantor";
  spec.dim = 2;
  spec.s.value = 0.3;
  spec.mode = AttractorKind::PointCloud;
  spec.cloud_depth = 6;
  spec.maps.emplace_back(1, rotation(30, false), vec2(0, 0), 0.3);
  spec.maps.emplace_back(1, rotation(75, true), vec2(1, 0), 0.3);
  spec.maps.emplace_back(2, rotation(140, false), vec2(0, 1), 0.3);
  return spec;
}

std::string exact(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double number(const json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string text = j.get<std::string>();
    char* end = nullptr;
    double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() && *end == '\0') return v;
  }
  throw ConfigError("field '" + field + "': expected a number or decimal string");
}

const json& required(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
  return j.at(key);
}

}  // namespace

std::vector<std::string> preset_names() { return {"goldenb", "square4", "cantor"}; }

IfsSpec preset(const std::string& name) {
  if (name == "goldenb") return golden_b();
  if (name == "square4") return square4();
  if (name == "cantor") return cantor();
  throw ConfigError("unknown preset '" + name + "'");
}

IfsSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("spec: expected a JSON object");
  IfsSpec spec;
  spec.name = j.value("name", std::string("unnamed"));
  spec.dim = required(j, "dim", "spec").get<int>();
  const json& s = required(j, "s", "spec");
  if (s.is_object()) {
    spec.s.value = number(required(s, "value", "s"), "s.value");
    if (s.contains("polynomial"))
      for (std::size_t i = 0; i < s["polynomial"].size(); ++i)
        spec.s.polynomial.push_back(number(s["polynomial"][i], "s.polynomial[" + std::to_string(i) + "]"));
    if (s.contains("bracket")) {
      const json& b = s["bracket"];
      if (!b.is_array() || b.size() != 2) throw ConfigError("field 's.bracket': expected [lo, hi]");
      spec.s.bracket = std::pair{number(b[0], "s.bracket[0]"), number(b[1], "s.bracket[1]")};
    }
  } else {
    spec.s.value = number(s, "s");
  }
  if (!spec.s.polynomial.empty()) spec.s.value = refine_root(spec.s.polynomial, spec.s.value, spec.s.bracket);
  const double base = spec.s.value;
  if (!(base > 0 && base < 1)) throw ConfigError("field 's': base ratio must lie in (0,1)");

  const std::string mode = j.value("mode", std::string("polygon"));
  if (mode == "polygon")
    spec.mode = AttractorKind::ExactPolygon;
  else if (mode == "pointcloud")
    spec.mode = AttractorKind::PointCloud;
  else
    throw ConfigError("field 'mode': expected 'polygon' or 'pointcloud'");
  spec.cloud_depth = j.value("cloud_depth", 6);

  const json& maps = required(j, "maps", "spec");
  if (!maps.is_array()) throw ConfigError("field 'maps': expected an array");
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const std::string where = "maps[" + std::to_string(i) + "]";
    const json& m = maps[i];
    const int a = required(m, "a", where).get<int>();
    Mat o;
    if (m.contains("matrix")) {
      const json& rows = m["matrix"];
      if (!rows.is_array() || static_cast<int>(rows.size()) != spec.dim)
        throw ConfigError(where + ".matrix: expected " + std::to_string(spec.dim) + " rows");
      o = Mat(spec.dim, spec.dim);
      for (int r = 0; r < spec.dim; ++r) {
        if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != spec.dim)
          throw ConfigError(where + ".matrix: row " + std::to_string(r) + " has the wrong length");
        for (int c = 0; c < spec.dim; ++c) o(r, c) = number(rows[r][c], where + ".matrix");
      }
    } else if (m.contains("rotation_degrees")) {
      if (spec.dim != 2) throw ConfigError(where + ": rotation_degrees is planar only");
      o = rotation(number(m["rotation_degrees"], where + ".rotation_degrees"), m.value("reflect", false));
    } else if (spec.dim == 2 && m.value("reflect", false)) {
      o = rotation(0, true);
    } else {
      o = Mat::Identity(spec.dim, spec.dim);
    }
    if (!is_orthogonal(o)) throw ConfigError(where + ": matrix is not orthogonal");
    const json& t = required(m, "translate", where);
    if (!t.is_array() || static_cast<int>(t.size()) != spec.dim)
      throw ConfigError(where + ".translate: expected " + std::to_string(spec.dim) + " entries");
    Vec q(spec.dim);
    for (int c = 0; c < spec.dim; ++c) q(c) = number(t[c], where + ".translate");
    if (a < 1) throw ConfigError(where + ".a: power must be >= 1");
    spec.maps.emplace_back(a, o, q, base);
  }
  if (j.contains("attractor")) {
    for (const json& v : j["attractor"]) {
      if (!v.is_array() || v.size() != 2) throw ConfigError("field 'attractor': vertices must be [x, y]");
      spec.polygon.v.emplace_back(number(v[0], "attractor"), number(v[1], "attractor"));
    }
  }
  if (spec.mode == AttractorKind::ExactPolygon && spec.polygon.v.empty())
    throw ConfigError("field 'attractor': polygon mode needs a vertex list");
  // Full validation (gcd, orthogonality, simple polygon) happens here.
  return Ifs::build(spec)->spec();
}

json spec_to_json(const IfsSpec& spec) {
  const bool strings = !spec.s.polynomial.empty();
  auto num = [&](double x) -> json { return strings ? json(exact(x)) : json(x); };
  json j;
  j["name"] = spec.name;
  j["dim"] = spec.dim;
  json s;
  s["value"] = num(spec.s.value);
  if (!spec.s.polynomial.empty()) {
    s["polynomial"] = json::array();
    for (double c : spec.s.polynomial) s["polynomial"].push_back(num(c));
  }
  if (spec.s.bracket) s["bracket"] = json::array({num(spec.s.bracket->first), num(spec.s.bracket->second)});
  j["s"] = s;
  j["mode"] = spec.mode == AttractorKind::ExactPolygon ? "polygon" : "pointcloud";
  if (spec.mode == AttractorKind::PointCloud) j["cloud_depth"] = spec.cloud_depth;
  j["maps"] = json::array();
  for (const Similitude& f : spec.maps) {
    json m;
    m["a"] = f.power();
    json rows = json::array();
    for (int r = 0; r < f.dim(); ++r) {
      json row = json::array();
      for (int c = 0; c < f.dim(); ++c) row.push_back(num(f.ortho()(r, c)));
      rows.push_back(row);
    }
    m["matrix"] = rows;
    json t = json::array();
    for (int c = 0; c < f.dim(); ++c) t.push_back(num(f.trans()(c)));
    m["translate"] = t;
    j["maps"].push_back(m);
  }
  if (spec.mode == AttractorKind::ExactPolygon) {
    j["attractor"] = json::array();
    for (const Vec2& v : spec.polygon.v) j["attractor"].push_back(json::array({num(v.x()), num(v.y())}));
  }
  return j;
}

IfsSpec load_spec(const std::string& path_or_preset) {
  for (const std::string& name : preset_names())
    if (name == path_or_preset) return Ifs::build(preset(name))->spec();
  std::ifstream in(path_or_preset);
  if (!in) throw ConfigError("cannot open spec file '" + path_or_preset + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("spec file '" + path_or_preset + "': " + e.what());
  }
  try {
    return spec_from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError("spec file '" + path_or_preset + "': " + e.what());
  }
}

void save_spec(const IfsSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write spec file '" + path + "'");
  out << spec_to_json(spec).dump(2) << "\n";
}

bool spec_equal(const IfsSpec& a, const IfsSpec& b) {
  auto same = [](double x, double y) { return std::memcmp(&x, &y, sizeof x) == 0; };
  if (a.name != b.name || a.dim != b.dim || a.mode != b.mode || !same(a.s.value, b.s.value)) return false;
  if (a.s.polynomial != b.s.polynomial || a.s.bracket != b.s.bracket) return false;
  if (a.mode == AttractorKind::PointCloud && a.cloud_depth != b.cloud_depth) return false;
  if (a.maps.size() != b.maps.size() || a.polygon.v.size() != b.polygon.v.size()) return false;
  for (std::size_t i = 0; i < a.maps.size(); ++i) {
    const Similitude &f = a.maps[i], &g = b.maps[i];
    if (f.power() != g.power() || !same(f.base(), g.base()) || f.dim() != g.dim()) return false;
    for (int r = 0; r < f.dim(); ++r) {
      if (!same(f.trans()(r), g.trans()(r))) return false;
      for (int c = 0; c < f.dim(); ++c)
        if (!same(f.ortho()(r, c), g.ortho()(r, c))) return false;
    }
  }
  for (std::size_t i = 0; i < a.polygon.v.size(); ++i)
    if (!same(a.polygon.v[i].x(), b.polygon.v[i].x()) || !same(a.polygon.v[i].y(), b.polygon.v[i].y())) return false;
  return true;
}

// ---- tile export -----------------------------------------------------------------

void write_tiles_ndjson(const Tiling& t, std::ostream& out) {
  for (const Tile& tile : t.tiles()) {
    const Similitude& tr = tile.transform;
    json rec;
    rec["address"] = tile.address ? json(tile.address->str()) : json(nullptr);
    rec["proto"] = tile.proto_index;
    json m = json::array();
    for (int r = 0; r < tr.dim(); ++r)
      for (int c = 0; c < tr.dim(); ++c) m.push_back(tr.ortho()(r, c));
    rec["matrix"] = m;
    json q = json::array();
    for (int c = 0; c < tr.dim(); ++c) q.push_back(tr.trans()(c));
    rec["translation"] = q;
    rec["power"] = tr.power();
    out << rec.dump() << "\n";
  }
}

std::string tiles_ndjson(const Tiling& t) {
  std::ostringstream out;
  write_tiles_ndjson(t, out);
  return out.str();
}

Tiling read_tiles_ndjson(std::istream& in, const IfsPtr& ifs) {
  std::vector<Tile> tiles;
  std::string line;
  int lineno = 0;
  const int d = ifs->dim();
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      json rec = json::parse(line);
      Mat o(d, d);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) o(r, c) = rec.at("matrix").at(r * d + c).get<double>();
      Vec q(d);
      for (int c = 0; c < d; ++c) q(c) = rec.at("translation").at(c).get<double>();
      Tile tile{std::nullopt, Similitude(rec.at("power").get<int>(), o, q, ifs->s()), rec.at("proto").get<int>()};
      if (!rec.at("address").is_null()) tile.address = AbsoluteAddress::parse(rec["address"].get<std::string>());
      tiles.push_back(std::move(tile));
    } catch (const json::exception& e) {
      throw ConfigError("tile record on line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return Tiling(ifs, std::move(tiles), Provenance::derived("imported tiles"));
}

// ---- SVG --------------------------------------------------------------------------

namespace {

constexpr std::array<const char*, 8> kPalette = {"#e6a23c", "#4a90c2", "#67b168", "#d9534f",
                                                 "#9b59b6", "#f0c419", "#1abc9c", "#7f8c8d"};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  if (std::strcmp(buf, "-0.0000") == 0) return "0.0000";
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<')
      out += "&lt;";
    else if (c == '>')
      out += "&gt;";
    else if (c == '&')
      out += "&amp;";
    else
      out += c;
  }
  return out;
}

}  // namespace

std::string render_svg(const Tiling& t, const RenderStyle& style) {
  const Ifs& ifs = t.ifs();
  std::array<double, 4> vp{0, 0, 1, 1};
  if (style.viewport) {
    vp = *style.viewport;
  } else if (!t.empty()) {
    BBox box = tile_bbox(ifs, t[0].transform);
    for (const Tile& tile : t.tiles()) {
      BBox b = tile_bbox(ifs, tile.transform);
      box.expand(b.lo);
      box.expand(b.hi);
    }
    const double pad = 0.02 * std::max(box.hi.x() - box.lo.x(), box.hi.y() - box.lo.y());
    vp = {box.lo.x() - pad, box.lo.y() - pad, box.hi.x() + pad, box.hi.y() + pad};
  }
  if (!(vp[2] > vp[0] && vp[3] > vp[1])) throw PreconditionError("render viewport must have positive extent");
  const double scale = style.width_px / (vp[2] - vp[0]);
  const int height = static_cast<int>(std::ceil((vp[3] - vp[1]) * scale));
  auto px = [&](double x) { return fmt((x - vp[0]) * scale); };
  auto py = [&](double y) { return fmt((vp[3] - y) * scale); };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << style.width_px << "\" height=\""
      << height << "\" viewBox=\"0 0 " << style.width_px << " " << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  for (const Tile& tile : t.tiles()) {
    std::size_t colour = static_cast<std::size_t>(std::max(tile.proto_index, 0));
    if (style.color_by == RenderStyle::ColorBy::AddressDepth && tile.address)
      colour = tile.address->theta.size() + tile.address->omega.size();
    const char* fill = kPalette[colour % kPalette.size()];
    if (ifs.polygon_mode()) {
      Polygon p = tile_polygon(ifs, tile.transform);
      out << "<path d=\"";
      for (std::size_t i = 0; i < p.v.size(); ++i)
        out << (i == 0 ? "M" : " L") << px(p.v[i].x()) << "," << py(p.v[i].y());
      out << " Z\" fill=\"" << fill << "\" stroke=\"#000000\" stroke-width=\"" << fmt(style.stroke_width) << "\"/>\n";
    } else {
      for (const Vec& p : tile_points(ifs, tile.transform))
        out << "<circle cx=\"" << px(p(0)) << "\" cy=\"" << py(p.size() > 1 ? p(1) : 0.0) << "\" r=\""
            << fmt(style.stroke_width) << "\" fill=\"" << fill << "\"/>\n";
    }
    if (style.label_addresses && tile.address) {
      Vec a = tile_anchor(ifs, tile.transform);
      const double size = std::max(6.0, 0.25 * tile.transform.scale() * ifs.diameter() * scale);
      out << "<text x=\"" << px(a(0)) << "\" y=\"" << py(a.size() > 1 ? a(1) : 0.0) << "\" font-size=\"" << fmt(size)
          << "\" text-anchor=\"middle\" dominant-baseline=\"middle\">" << escape(tile.address->str()) << "</text>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

void render_svg(const Tiling& t, const RenderStyle& style, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << render_svg(t, style);
  if (!out) throw Error("write failed for '" + path + "'");
}

// ---- reports ------------------------------------------------------------------------

bool Report::pass() const {
  for (const CheckResult& c : checks)
    if (!c.pass) return false;
  return true;
}

json Report::to_json() const {
  json j;
  j["name"] = name;
  j["pass"] = pass();
  j["checks"] = json::array();
  for (const CheckResult& c : checks) j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"metrics", c.metrics}});
  return j;
}

}  // namespace blowup
