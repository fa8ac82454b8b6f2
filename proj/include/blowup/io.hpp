// Spec files, presets, tile export, SVG rendering and verification reports.

#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "blowup/ifs.hpp"
#include "blowup/tiling.hpp"

namespace blowup {

// Built-in specs: "goldenb", "square4", "cantor".
std::vector<std::string> preset_names();
IfsSpec preset(const std::string& name);

// Parses and validates; s is refined from its polynomial when one is given.
// Throws ConfigError naming the offending field.
IfsSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const IfsSpec& spec);

// A preset name or a path to a JSON spec file.
IfsSpec load_spec(const std::string& path_or_preset);
void save_spec(const IfsSpec& spec, const std::string& path);

// Exact field-by-field equality (doubles compared bitwise).
bool spec_equal(const IfsSpec& a, const IfsSpec& b);

// One JSON record per line: address, proto, matrix (row-major orthogonal
// part), translation, power.
void write_tiles_ndjson(const Tiling& t, std::ostream& out);
std::string tiles_ndjson(const Tiling& t);
Tiling read_tiles_ndjson(std::istream& in, const IfsPtr& ifs);

struct RenderStyle {
  enum class ColorBy { ProtoIndex, AddressDepth };
  ColorBy color_by = ColorBy::ProtoIndex;
  double stroke_width = 1.0;  // in output pixels
  bool label_addresses = false;
  int width_px = 800;
  // lo.x, lo.y, hi.x, hi.y; computed from the tiling when absent.
  std::optional<std::array<double, 4>> viewport;
};

std::string render_svg(const Tiling& t, const RenderStyle& style);
void render_svg(const Tiling& t, const RenderStyle& style, const std::string& path);

struct CheckResult {
  std::string name;
  bool pass = false;
  nlohmann::json metrics = nlohmann::json::object();
};

struct Report {
  std::string name;
  std::vector<CheckResult> checks;
  bool pass() const;
  nlohmann::json to_json() const;
};

}  // namespace blowup
