// Command-line front end for the blowup library.
//
// Exit codes: 0 success or all checks passed, 1 a verification failed or was
// inconclusive, 2 usage or configuration error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "blowup/algebra.hpp"
#include "blowup/errors.hpp"
#include "blowup/io.hpp"
#include "blowup/verify.hpp"

using namespace blowup;

namespace {

struct Source {
  std::string spec = "goldenb";
  std::optional<int> level;
  std::optional<std::string> theta;
};

void add_source(CLI::App* cmd, Source& src, bool need_tiling) {
  cmd->add_option("--spec", src.spec, "preset name (goldenb, square4, cantor) or JSON spec file");
  if (!need_tiling) return;
  auto* lvl = cmd->add_option("--level,-k", src.level, "canonical tiling T_k");
  auto* th = cmd->add_option("--theta", src.theta, "prefix tiling pi(theta), e.g. 121 or 1,2,1");
  lvl->excludes(th);
  th->excludes(lvl);
}

IfsPtr load(const Source& src) { return Ifs::build(load_spec(src.spec)); }

Tiling tiling_of(const Source& src, const IfsPtr& ifs) {
  if (src.theta) return pi_prefix(Word::parse(*src.theta), ifs);
  if (src.level) return canonical_tiling(*src.level, ifs);
  throw ConfigError("one of --level or --theta is required");
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

CheckResult check_nonoverlap(const IfsPtr& ifs, int level) {
  CheckResult c{"nonoverlap", true, {}};
  c.metrics["runs"] = nlohmann::json::array();
  std::vector<Tiling> tilings;
  tilings.push_back(canonical_tiling(level, ifs));
  if (ifs->polygon_mode()) tilings.push_back(pi_prefix(Word::parse("1212"), ifs));
  for (const Tiling& t : tilings) {
    OverlapReport r = nonoverlap_check(t);
    nlohmann::json m = nlohmann::json::object();
    m["tiling"] = t.provenance().str();
    m["tiles"] = t.size();
    m["authoritative"] = r.authoritative;
    if (r.authoritative) {
      m["max_overlap"] = r.max_overlap;
      m["threshold"] = r.threshold;
    } else {
      m["min_separation"] = r.min_separation;
    }
    c.metrics["runs"].push_back(m);
    c.pass = c.pass && r.pass;
  }
  return c;
}

CheckResult check_selfsim(const IfsPtr& ifs, const Word& alpha, const Word& beta) {
  CheckResult c{"selfsim", false, {}};
  const int K = static_cast<int>(alpha.size() + 3 * beta.size());
  SelfSimilarityReport r = self_similarity_check(alpha, beta, K, ifs);
  c.pass = r.ok;
  c.metrics["alpha"] = alpha.str();
  c.metrics["beta"] = beta.str();
  c.metrics["K"] = K;
  c.metrics["core_prefix"] = r.core_prefix;
  c.metrics["core_tiles"] = r.decomposition.size();
  c.metrics["psi_power"] = r.psi.power();
  if (r.failed_tile) c.metrics["failed_tile"] = *r.failed_tile;
  return c;
}

CheckResult check_quasi(const IfsPtr& ifs, int level) {
  CheckResult c{"quasi", false, {}};
  const int small = std::min(level, 4);
  Tiling source = canonical_tiling(small, ifs);
  Tiling target = canonical_tiling(level, ifs);
  Vec centre = tile_anchor(*ifs, source[source.size() / 2].transform);
  const double radius = 0.5 * ifs->diameter() * ifs->s();
  Tiling p = patch_tiling(source, patch(source, centre, radius));
  QuasiReport r = quasiperiodicity_probe(p, target);
  c.pass = r.found;
  c.metrics["patch_tiles"] = p.size();
  c.metrics["target"] = target.provenance().str();
  c.metrics["copies"] = r.copies.size();
  c.metrics["radius"] = r.found ? nlohmann::json(r.radius) : nlohmann::json(nullptr);
  return c;
}

CheckResult check_inject(const IfsPtr& ifs) {
  CheckResult c{"inject", false, {}};
  InjectivityReport r = injectivity_precondition(ifs);
  c.pass = r.conclusive && r.holds;
  c.metrics["conclusive"] = r.conclusive;
  c.metrics["pairs"] = nlohmann::json::array();
  for (const auto& p : r.pairs) {
    nlohmann::json m = nlohmann::json::object();
    m["i"] = p.i;
    m["j"] = p.j;
    m["common"] = p.common;
    m["uncovered_fraction"] = p.uncovered_fraction;
    c.metrics["pairs"].push_back(m);
  }
  return c;
}

int run(int argc, char** argv) {
  CLI::App app{"Blow-up tilings of IFS attractors"};
  app.require_subcommand(1);

  Source src;
  int k = 0;
  auto* omega = app.add_subcommand("omega", "print the words of Omega_k, one per line");
  add_source(omega, src, false);
  omega->add_option("-k,--level", k, "level k")->required();

  std::string out_path;
  auto* tiles = app.add_subcommand("tiles", "emit tiles as newline-delimited JSON");
  add_source(tiles, src, true);
  tiles->add_option("--out,-o", out_path, "output file (default stdout)");

  RenderStyle style;
  std::string colour = "proto";
  auto* render = app.add_subcommand("render", "render a tiling to SVG");
  add_source(render, src, true);
  render->add_option("--out,-o", out_path, "SVG file (default stdout)");
  render->add_flag("--labels", style.label_addresses, "label tiles with their addresses");
  render->add_option("--color-by", colour, "proto or depth")->check(CLI::IsMember({"proto", "depth"}));
  render->add_option("--stroke", style.stroke_width, "stroke width in pixels");
  render->add_option("--width", style.width_px, "image width in pixels")->check(CLI::PositiveNumber);

  auto* addresses = app.add_subcommand("addresses", "address table of a tiling");
  add_source(addresses, src, true);

  bool all = false, nonoverlap = false, selfsim = false, quasi = false, inject = false;
  std::string alpha_text, beta_text = "12", report_path;
  int verify_level = 6;
  auto* verify = app.add_subcommand("verify", "run verification checks and write a JSON report");
  add_source(verify, src, false);
  verify->add_flag("--all", all, "run every check");
  verify->add_flag("--nonoverlap", nonoverlap, "pairwise overlap areas");
  verify->add_flag("--selfsim", selfsim, "self-similarity of pi(alpha beta beta ...)");
  verify->add_flag("--quasi", quasi, "patch repetition");
  verify->add_flag("--inject", inject, "injectivity precondition");
  verify->add_option("--alpha", alpha_text, "preperiod for --selfsim");
  verify->add_option("--beta", beta_text, "period for --selfsim");
  verify->add_option("--level,-k", verify_level, "canonical level used by --nonoverlap and --quasi");
  verify->add_option("--report", report_path, "report file (default stdout)");

  bool strong = false;
  auto* rigidity = app.add_subcommand("rigidity", "bounded rigidity search");
  add_source(rigidity, src, false);
  rigidity->add_flag("--strong", strong, "also run the strong rigidity search");

  auto* spec_cmd = app.add_subcommand("spec", "print a spec as JSON");
  add_source(spec_cmd, src, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }

  if (omega->parsed()) {
    IfsPtr ifs = load(src);
    if (k < 0) throw PreconditionError("level must be nonnegative");
    for (const Word& w : omega_level(k, ifs->pv())) std::cout << w.str() << "\n";
    return 0;
  }
  if (tiles->parsed()) {
    IfsPtr ifs = load(src);
    emit(tiles_ndjson(tiling_of(src, ifs)), out_path);
    return 0;
  }
  if (render->parsed()) {
    IfsPtr ifs = load(src);
    style.color_by = colour == "depth" ? RenderStyle::ColorBy::AddressDepth : RenderStyle::ColorBy::ProtoIndex;
    emit(render_svg(tiling_of(src, ifs), style), out_path);
    return 0;
  }
  if (addresses->parsed()) {
    IfsPtr ifs = load(src);
    Tiling t = tiling_of(src, ifs);
    for (const Tile& tile : t.tiles())
      std::cout << (tile.address ? tile.address->str() : std::string("?")) << "\t" << tile.proto_index << "\n";
    return 0;
  }
  if (verify->parsed()) {
    IfsPtr ifs = load(src);
    if (!(all || nonoverlap || selfsim || quasi || inject)) throw ConfigError("verify: choose --all or at least one check");
    Report rep{ifs->spec().name, {}};
    if (all || nonoverlap) rep.checks.push_back(check_nonoverlap(ifs, verify_level));
    if (all || selfsim) rep.checks.push_back(check_selfsim(ifs, Word::parse(alpha_text), Word::parse(beta_text)));
    if (all || quasi) rep.checks.push_back(check_quasi(ifs, verify_level));
    if (all || inject) rep.checks.push_back(check_inject(ifs));
    emit(rep.to_json().dump(2) + "\n", report_path);
    for (const CheckResult& c : rep.checks) std::cerr << c.name << ": " << (c.pass ? "pass" : "FAIL") << "\n";
    return rep.pass() ? 0 : 1;
  }
  if (rigidity->parsed()) {
    IfsPtr ifs = load(src);
    RigidityReport r = strong ? strong_rigidity_check(ifs) : rigidity_check(ifs);
    std::cout << (strong ? "strong rigidity: " : "rigidity: ") << verdict_name(r.verdict) << " (" << r.condition << ")\n";
    std::cout << "candidates examined: " << r.candidates << "\n";
    if (r.witness) {
      const Similitude& e = *r.witness;
      std::cout << "witness E: ortho [";
      for (int i = 0; i < e.dim(); ++i)
        for (int j = 0; j < e.dim(); ++j) std::cout << (i + j ? " " : "") << e.ortho()(i, j);
      std::cout << "] translate [";
      for (int i = 0; i < e.dim(); ++i) std::cout << (i ? " " : "") << e.trans()(i);
      std::cout << "]\ncommon tiles: " << r.common.size() << "\n";
    }
    return r.verdict == RigidityReport::Verdict::Rigid ? 0 : 1;
  }
  if (spec_cmd->parsed()) {
    std::cout << spec_to_json(load_spec(src.spec)).dump(2) << "\n";
    return 0;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidWord& e) {
    std::cerr << "invalid word: " << e.what() << "\n";
    return 2;
  } catch (const LevelCapExceeded& e) {
    std::cerr << "level cap: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
