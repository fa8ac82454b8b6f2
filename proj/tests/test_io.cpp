#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "blowup/errors.hpp"
#include "blowup/io.hpp"

using namespace blowup;
using nlohmann::json;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("blowup_test_" + std::to_string(::getpid()) + "_" + name);
}

json minimal_spec() {
  return json::parse(R"({
    "name": "two halves",
    "dim": 2,
    "s": 0.5,
    "maps": [
      {"a": 1, "matrix": [[1, 0], [0, 1]], "translate": [0, 0]},
      {"a": 1, "rotation_degrees": 0, "translate": ["0.5", 0]},
      {"a": 1, "matrix": [[1, 0], [0, 1]], "translate": [0, 0.5]},
      {"a": 1, "matrix": [[1, 0], [0, 1]], "translate": [0.5, 0.5]}
    ],
    "attractor": [[0, 0], [1, 0], [1, 1], [0, 1]]
  })");
}

}  // namespace

TEST_CASE("presets") {
  CHECK(preset_names() == std::vector<std::string>{"goldenb", "square4", "cantor"});
  IfsSpec g = preset("goldenb");
  CHECK(g.pv() == PowerVector({1, 2}));
  CHECK(std::abs(eval_polynomial(g.s.polynomial, g.s.value)) < 1e-15);
  CHECK(g.maps[0].ortho()(0, 1) == 1.0);
  CHECK(g.maps[0].ortho()(1, 0) == -1.0);
  CHECK(g.maps[1].ortho()(0, 0) == -1.0);
  CHECK(g.maps[1].trans()(0) == 1.0);
  CHECK(g.maps[0].trans()(1) == g.s.value);
  IfsSpec c = preset("cantor");
  CHECK(c.mode == AttractorKind::PointCloud);
  CHECK(c.s.value < 0.5);
  CHECK_THROWS_AS(preset("nope"), ConfigError);
}

TEST_CASE("spec json round trip is exact") {
  for (const std::string& name : preset_names()) {
    CAPTURE(name);
    IfsSpec spec = preset(name);
    IfsSpec back = spec_from_json(json::parse(spec_to_json(spec).dump()));
    CHECK(spec_equal(spec, back));
    const auto path = temp_file(name + ".json");
    save_spec(spec, path.string());
    CHECK(spec_equal(spec, load_spec(path.string())));
    std::filesystem::remove(path);
  }
  CHECK(spec_equal(load_spec("goldenb"), preset("goldenb")));
}

TEST_CASE("spec parsing variants and errors") {
  IfsSpec s = spec_from_json(minimal_spec());
  CHECK(s.name == "two halves");
  CHECK(s.maps.size() == 4);
  CHECK(s.maps[1].trans()(0) == 0.5);
  CHECK(Ifs::build(s)->measure_sum() == doctest::Approx(1.0));

  json gcd = minimal_spec();
  for (auto& m : gcd["maps"]) m["a"] = 2;
  CHECK_THROWS_AS(Ifs::build(spec_from_json(gcd)), ConfigError);

  json skew = minimal_spec();
  skew["maps"][0]["matrix"] = json::parse("[[1, 0.2], [0, 1]]");
  CHECK_THROWS_AS(spec_from_json(skew), ConfigError);

  json big_s = minimal_spec();
  big_s["s"] = 1.5;
  CHECK_THROWS(Ifs::build(spec_from_json(big_s)));

  json no_maps = minimal_spec();
  no_maps.erase("maps");
  CHECK_THROWS_AS(spec_from_json(no_maps), ConfigError);

  json mode = minimal_spec();
  mode["mode"] = "voxels";
  CHECK_THROWS_AS(spec_from_json(mode), ConfigError);

  json open = minimal_spec();
  open["attractor"] = json::parse("[[0, 0], [1, 1], [1, 0], [0, 1]]");
  CHECK_THROWS_AS(Ifs::build(spec_from_json(open)), ConfigError);

  json poly = minimal_spec();
  poly["s"] = json::parse(R"({"value": 0.7, "polynomial": [-0.25, 0, 1], "bracket": [0, 1]})");
  CHECK(Ifs::build(spec_from_json(poly))->s() == 0.5);
  CHECK_THROWS_AS(load_spec("/no/such/file.json"), ConfigError);
}

TEST_CASE("tile ndjson round trip") {
  IfsPtr ifs = Ifs::build(preset("goldenb"));
  Tiling t = pi_prefix(Word{1, 2, 1}, ifs);
  const std::string text = tiles_ndjson(t);
  CHECK(count(text, "\n") == t.size());
  std::istringstream first_line(text.substr(0, text.find('\n')));
  json rec = json::parse(first_line);
  CHECK(rec.contains("address"));
  CHECK(rec.contains("proto"));
  CHECK(rec["matrix"].size() == 4);
  CHECK(rec["translation"].size() == 2);
  CHECK(rec.contains("power"));

  std::istringstream in(text);
  Tiling back = read_tiles_ndjson(in, ifs);
  REQUIRE(back.size() == t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(back[i].proto_index == t[i].proto_index);
    CHECK(back[i].address == t[i].address);
    CHECK(back[i].transform.power() == t[i].transform.power());
    CHECK(back[i].transform.trans() == t[i].transform.trans());
    CHECK(back[i].transform.ortho() == t[i].transform.ortho());
  }
  CHECK(tiles_ndjson(back) == text);

  std::istringstream broken("{\"address\": null}\n");
  CHECK_THROWS(read_tiles_ndjson(broken, ifs));
}

TEST_CASE("svg rendering") {
  IfsPtr ifs = Ifs::build(preset("goldenb"));
  RenderStyle style;
  style.label_addresses = true;
  const std::string svg = render_svg(canonical_tiling(3, ifs), style);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(count(svg, "<path ") == 8);
  CHECK(count(svg, "<text ") == 8);
  CHECK(svg == render_svg(canonical_tiling(3, ifs), style));

  style.color_by = RenderStyle::ColorBy::AddressDepth;
  style.label_addresses = false;
  const std::string depth = render_svg(canonical_tiling(3, ifs), style);
  CHECK(count(depth, "<text ") == 0);
  CHECK(depth != svg);

  Tiling empty(ifs, {}, Provenance::derived("empty"));
  const std::string blank = render_svg(empty, RenderStyle{});
  CHECK(blank.find("<svg") != std::string::npos);
  CHECK(blank.find("</svg>") != std::string::npos);
  CHECK(count(blank, "<path ") == 0);

  IfsPtr cantor = Ifs::build(preset("cantor"));
  const std::string dots = render_svg(canonical_tiling(1, cantor), RenderStyle{});
  CHECK(count(dots, "<circle ") > 0);

  const auto path = temp_file("t.svg");
  render_svg(canonical_tiling(2, ifs), RenderStyle{}, path.string());
  std::ifstream f(path);
  std::stringstream buf;
  buf << f.rdbuf();
  CHECK(buf.str() == render_svg(canonical_tiling(2, ifs), RenderStyle{}));
  std::filesystem::remove(path);
}

TEST_CASE("reports") {
  Report r{"demo", {}};
  CHECK(r.pass());
  r.checks.push_back({"a", true, json::object()});
  r.checks.push_back({"b", false, json{{"x", 1}}});
  CHECK_FALSE(r.pass());
  json j = r.to_json();
  CHECK(j["name"] == "demo");
  CHECK(j["pass"] == false);
  CHECK(j["checks"].size() == 2);
  CHECK(j["checks"][1]["metrics"]["x"] == 1);
}
