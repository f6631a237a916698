#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "clusterlab/clusterlab.hpp"

namespace cl = clusterlab;
using cl::json;

namespace {

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

struct Globals {
  std::uint64_t seed = 1;
  std::string out;
  std::string svg;
  std::string manifest;
};

struct Run {
  Globals g;
  std::vector<std::string> args;
  cl::RunManifest manifest;

  void input(const std::string& path, const std::string& bytes) { manifest.inputs.push_back({path, sha256_hex(bytes)}); }

  void emit_json(const json& doc) {
    const std::string text = cl::dump(doc);
    if (g.out.empty()) {
      std::cout << text;
    } else {
      cl::write_text_file(g.out, text);
      manifest.outputs.push_back({g.out, sha256_hex(text)});
    }
  }

  void emit_svg(const std::string& svg) {
    if (g.svg.empty()) return;
    cl::write_svg(g.svg, svg);
    manifest.outputs.push_back({g.svg, sha256_hex(svg)});
  }

  json read_json(const std::string& path) {
    const std::string text = cl::read_text_file(path);
    input(path, text);
    return cl::parse_json_text(text, path);
  }
};

json check(const std::string& name, bool passed, const std::string& detail = {}) {
  json o;
  o["name"] = name;
  o["passed"] = passed;
  if (!detail.empty()) o["detail"] = detail;
  return o;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// gen

struct GenOptions {
  std::string kind;
  double min_radius = 1e-3;
  int depth = 3;
  std::string areas;
  std::string schedule = "absolute";
  double base = 0.25;
  double area = 0.05;
};

void run_gen(Run& run, const GenOptions& o) {
  cl::Cluster c;
  if (o.kind == "apollonian") {
    c = cl::apollonian_cluster(cl::generate_apollonian(o.min_radius));
  } else if (o.kind == "squares") {
    std::vector<double> areas;
    if (!o.areas.empty()) {
      areas = cl::parse_area_spec(o.areas).areas;
    } else {
      areas = cl::square_gasket_areas(o.depth);
    }
    c = cl::build_square_gasket(areas);
  } else if (o.kind == "cantor") {
    cl::CantorSchedule s;
    if (o.schedule == "relative") {
      s.kind = cl::CantorSchedule::Kind::relative;
    } else if (o.schedule != "absolute") {
      throw cl::Error(cl::ErrorCode::invalid_argument, "schedule must be absolute or relative");
    }
    s.base = o.base;
    c = cl::build_cantor_cluster(o.depth, s).cluster;
  } else if (o.kind == "double-bubble") {
    c = cl::build_double_bubble(o.area);
  } else {
    throw cl::Error(cl::ErrorCode::invalid_argument, "unknown generator '" + o.kind + "'");
  }
  run.emit_json(cl::cluster_to_json(c));
  if (!run.g.svg.empty()) run.emit_svg(cl::render_svg(c));
}

// perim

struct PerimOptions {
  std::string input;
  std::string functional = "classical";
  std::string norm = "manhattan";
  double s = 0.5;
  std::uint64_t samples = 100000;
};

cl::Norm load_norm(Run& run, const std::string& spec) {
  if (spec == "manhattan") return cl::Norm::manhattan();
  if (spec == "euclid" || spec == "euclidean") return cl::Norm::euclidean();
  return cl::norm_from_json(run.read_json(spec.rfind("file:", 0) == 0 ? spec.substr(5) : spec));
}

bool all_exact(const cl::Cluster& c) {
  for (const auto& r : c.regions)
    if (!cl::is_exact(r)) return false;
  return true;
}

void run_perim(Run& run, const PerimOptions& o) {
  const cl::Cluster c = cl::cluster_from_json(run.read_json(o.input));
  json out;
  out["format"] = "clusterlab.perimeter";
  out["input"] = o.input;
  out["functional"] = o.functional;
  out["regions"] = c.size();
  json checks = json::array();
  if (o.functional == "classical") {
    const double p = cl::cluster_perimeter(c);
    out["value"] = p;
    json floors = json::array();
    bool floors_ok = true;
    for (const auto& r : c.regions) {
      const double a = cl::area(r), pk = cl::region_perimeter(r), floor = 2.0 * std::sqrt(cl::pi * a);
      floors.push_back(json{{"area", a}, {"perimeter", pk}, {"floor", floor}});
      if (cl::is_exact(r)) floors_ok = floors_ok && pk >= floor * (1.0 - 1e-12);
    }
    out["isoperimetric_floors"] = floors;
    checks.push_back(check("isoperimetric floor per region", floors_ok));
    if (all_exact(c) && !c.empty()) {
      const double len = cl::interface_length(cl::extract_mesh(c));
      out["interface_length"] = len;
      const double rel = std::abs(len - p) / std::max(p, cl::min_length);
      checks.push_back(check("perimeter equals interface length", rel <= 1e-10, "relative difference " + fmt(rel)));
    }
  } else if (o.functional == "aniso") {
    const cl::Norm phi = load_norm(run, o.norm);
    out["norm"] = phi.name();
    out["value"] = cl::anisotropic_cluster_perimeter(c, phi);
    json floors = json::array();
    bool ok = true;
    for (const auto& r : c.regions) {
      const double a = cl::area(r), pk = cl::anisotropic_perimeter(r, phi), floor = cl::wulff_lower_bound(a, phi);
      floors.push_back(json{{"area", a}, {"perimeter", pk}, {"floor", floor}});
      ok = ok && pk >= floor * (1.0 - 1e-12);
    }
    out["wulff_floors"] = floors;
    checks.push_back(check("Wulff floor per region", ok));
  } else if (o.functional == "frac") {
    const cl::FractionalOrder s(o.s);
    const auto e = cl::fractional_cluster_perimeter(c, s, {}, o.samples, run.g.seed);
    out["s"] = o.s;
    out["samples"] = o.samples;
    out["seed"] = run.g.seed;
    out["value"] = e.value;
    out["standard_error"] = e.standard_error;
    out["union_value"] = e.union_value;
    out["regions_value"] = e.regions_value;
    out["tail_bound"] = e.tail_bound;
  } else {
    throw cl::Error(cl::ErrorCode::invalid_argument, "functional must be classical, aniso or frac");
  }
  out["checks"] = checks;
  run.emit_json(out);
}

// minimize

struct MinimizeOptions {
  std::string areas;
  int n = 1;
  std::string grid = "256x256";
  double h = 0.0;
  double sweeps = 16.0;
  double cool = 0.97;
  double lambda = 0.0;
  bool single = false;
};

cl::GridSpec parse_grid(const std::string& text, double h) {
  int w = 0, ht = 0;
  char x = 0, extra = 0;
  if (std::sscanf(text.c_str(), "%d%c%d%c", &w, &x, &ht, &extra) != 3 || x != 'x')
    throw cl::Error(cl::ErrorCode::invalid_argument, "grid must look like 256x256");
  cl::GridSpec g;
  g.width = w;
  g.height = ht;
  g.h = h > 0.0 ? h : 1.0 / std::max(w, ht);
  return g;
}

void run_minimize(Run& run, const MinimizeOptions& o) {
  const cl::AreaSpec spec = cl::parse_area_spec(o.areas, o.n);
  if (static_cast<int>(spec.areas.size()) < o.n)
    throw cl::Error(cl::ErrorCode::invalid_argument, "area spec has fewer than n areas");
  const cl::GridSpec grid = parse_grid(o.grid, o.h);
  cl::AnnealConfig cfg;
  cfg.sweeps_per_temperature = o.sweeps;
  cfg.cooling = o.cool;
  cfg.lambda = o.lambda;
  cfg.seed = run.g.seed;

  // Everything past the first n areas belongs to the tail of the bound.
  std::vector<double> head(spec.areas.begin(), spec.areas.begin() + o.n);
  double tail = spec.sqrt_tail;
  for (std::size_t k = static_cast<std::size_t>(o.n); k < spec.areas.size(); ++k) tail += std::sqrt(spec.areas[k]);

  json out;
  out["format"] = "clusterlab.minimize";
  out["area_spec"] = o.areas;
  out["grid_spec"] = json{{"width", grid.width}, {"height", grid.height}, {"h", grid.h}};
  json checks = json::array();
  std::vector<cl::MinimizeResult> runs;
  if (o.single) {
    auto r = cl::minimize_n_cluster(head, grid, cfg);
    double root = tail;
    for (double a : head) root += std::sqrt(a);
    out["p_bar"] = 2.0 * std::sqrt(cl::pi) * root;
    out["p_estimate"] = r.p_estimate;
    runs.push_back(std::move(r));
  } else {
    auto seq = cl::p_sequence(head, tail, o.n, grid, cfg);
    out["p_sequence"] = seq.p;
    out["p_bar"] = seq.p_bar;
    out["monotone"] = seq.monotone;
    out["bounded"] = seq.bounded;
    out["hausdorff"] = seq.hausdorff;
    checks.push_back(check("p_n nondecreasing within 2%", seq.monotone));
    checks.push_back(check("p_n <= 1.03 p_bar", seq.bounded));
    runs = std::move(seq.runs);
  }
  json results = json::array();
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto& r = runs[k];
    const std::string tag = "n=" + std::to_string(r.grid.regions()) + ": ";
    checks.push_back(check(tag + "areas within tolerance", r.success));
    if (r.success) checks.push_back(check(tag + "boundary connected", r.boundary_connected));
    if (r.boundary_connected) {
      const double d = cl::grid_boundary_diameter(r.grid);
      checks.push_back(check(tag + "diameter <= 1.02 p", d <= 1.02 * r.p_estimate, fmt(d) + " vs " + fmt(r.p_estimate)));
    }
    results.push_back(cl::minimize_result_to_json(r));
  }
  out["success"] = std::all_of(runs.begin(), runs.end(), [](const auto& r) { return r.success; });
  out["boundary_connected"] = std::all_of(runs.begin(), runs.end(), [](const auto& r) { return r.boundary_connected; });
  out["checks"] = checks;
  out["results"] = results;
  run.emit_json(out);
  if (!run.g.svg.empty()) run.emit_svg(cl::render_svg(runs.back().grid));
}

// exponent

struct ExponentOptions {
  double fine = 1e-4;
  double coarse = 1e-2;
  double tolerance = 0.05;
};

void run_exponent(Run& run, const ExponentOptions& o) {
  if (!(o.fine > 0.0) || !(o.coarse > o.fine))
    throw cl::Error(cl::ErrorCode::invalid_argument, "need 0 < fine < coarse");
  const auto nodes = cl::generate_apollonian(o.fine);
  const auto disks = cl::apollonian_disks(nodes);
  json out;
  out["format"] = "clusterlab.exponent";
  out["generator"] = "apollonian";
  out["min_radius"] = o.fine;
  out["disk_count"] = disks.size();
  const double cov = cl::coverage(disks);
  out["coverage"] = cov;
  json sums = json::array();
  json partial = json::array();
  for (double cut = o.coarse; cut >= o.fine * (1.0 - 1e-12); cut /= 10.0) {
    const double s1 = cl::radius_power_sum(disks, 1.0, cut);
    sums.push_back(json{{"cutoff", cut}, {"alpha_1", s1}, {"alpha_1.4", cl::radius_power_sum(disks, 1.4, cut)}});
    partial.push_back(json{{"cutoff", cut}, {"perimeter", 2.0 * cl::pi * s1}});
  }
  out["radius_sums"] = sums;
  out["perimeter_partial_sums"] = partial;
  json checks = json::array();
  const double res = cl::max_descartes_residual(nodes), tan = cl::max_tangency_error(nodes);
  checks.push_back(check("Descartes relation", res <= 1e-9, fmt(res)));
  checks.push_back(check("pairwise tangency", tan <= 1e-9, fmt(tan)));
  checks.push_back(check("coverage >= 0.95", cov >= 0.95, fmt(cov)));
  const auto grow1 = cl::series_growth(disks, 1.0, o.coarse, o.fine);
  checks.push_back(check("sum r grows >= 1.5x", grow1.factor >= 1.5, fmt(grow1.factor)));
  const auto grow14 = cl::series_growth(disks, 1.4, o.coarse, o.fine);
  checks.push_back(check("sum r^1.4 changes < 5%", grow14.factor - 1.0 < 0.05, fmt(grow14.factor)));
  // The bands [fine, mid) and [mid, coarse) stay clear of the few large seed disks.
  const auto est = cl::estimate_packing_exponent(disks, o.tolerance, std::sqrt(o.coarse * o.fine), o.fine);
  out["alpha_hat"] = est.alpha_hat;
  out["alpha_bracket"] = json::array({est.alpha_lo, est.alpha_hi});
  checks.push_back(check("alpha_hat in [1.25, 1.40]", est.alpha_hat >= 1.25 && est.alpha_hat <= 1.40, fmt(est.alpha_hat)));
  checks.push_back(check("bracket <= tolerance", est.alpha_hi - est.alpha_lo <= o.tolerance, fmt(est.alpha_hi - est.alpha_lo)));
  out["checks"] = checks;
  run.emit_json(out);
}

// render

void run_render(Run& run, const std::string& input) {
  if (run.g.svg.empty()) run.g.svg = run.g.out;
  if (run.g.svg.empty()) throw cl::Error(cl::ErrorCode::invalid_argument, "render needs --svg or --out");
  const json doc = run.read_json(input);
  const std::string format = doc.value("format", std::string{});
  if (format == "clusterlab.cluster") {
    run.emit_svg(cl::render_svg(cl::cluster_from_json(doc)));
  } else if (format == "clusterlab.minimize") {
    const json& results = doc.at("results");
    if (results.empty()) throw cl::Error(cl::ErrorCode::invalid_argument, "minimize output has no results");
    run.emit_svg(cl::render_svg(cl::grid_from_json(results.back().at("grid"))));
  } else {
    throw cl::Error(cl::ErrorCode::invalid_argument, "cannot render '" + format + "'");
  }
}

int run_cli(const std::vector<std::string>& args);

int run_replay(Run& run, const std::string& path) {
  const cl::RunManifest m = cl::manifest_from_json(run.read_json(path));
  if (m.version != cl::tool_version)
    std::cerr << "warning: manifest written by version " << m.version << ", running " << cl::tool_version << "\n";
  const int code = run_cli(m.arguments);
  if (code != 0) return code;
  bool same = true;
  for (const auto& d : m.outputs) {
    const std::string now = sha256_hex(cl::read_text_file(d.path));
    const bool eq = now == d.sha256;
    same = same && eq;
    std::cerr << (eq ? "identical " : "DIFFERENT ") << d.path << "\n";
  }
  return same ? 0 : 1;
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Planar cluster lab: generators, perimeters, minimizers"};
  app.require_subcommand(1);
  // "--h" is the cell size, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");
  Run run;
  run.args = args;
  app.add_option("--seed", run.g.seed, "Seed for all randomness");
  app.add_option("--out", run.g.out, "Output JSON path (stdout if omitted)");
  app.add_option("--svg", run.g.svg, "Also write an SVG rendering");
  app.add_option("--manifest", run.g.manifest, "Write a replay manifest");

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "Generate a cluster");
  g->add_option("kind", gen.kind, "apollonian | squares | cantor | double-bubble")->required();
  g->add_option("--min-radius", gen.min_radius, "Apollonian radius cutoff");
  g->add_option("--depth", gen.depth, "Square gasket or Cantor depth");
  g->add_option("--areas", gen.areas, "Square gasket area spec, e.g. pow4:1,1,1,2");
  g->add_option("--schedule", gen.schedule, "Cantor schedule: absolute | relative");
  g->add_option("--base", gen.base, "Cantor schedule base");
  g->add_option("--area", gen.area, "Double bubble area per chamber");

  PerimOptions perim;
  auto* p = app.add_subcommand("perim", "Perimeter of a cluster file");
  p->add_option("input", perim.input, "Cluster JSON")->required();
  p->add_option("--functional", perim.functional, "classical | aniso | frac");
  p->add_option("--norm", perim.norm, "manhattan | euclid | file:<unit-ball JSON>");
  p->add_option("--s", perim.s, "Fractional order in (0, 1)");
  p->add_option("--samples", perim.samples, "Monte Carlo line samples");

  MinimizeOptions mini;
  auto* m = app.add_subcommand("minimize", "Annealed minimal clusters on a grid");
  m->add_option("--areas", mini.areas, "Area spec, e.g. geom:0.25,0.25")->required();
  m->add_option("--n", mini.n, "Number of regions");
  m->add_option("--grid", mini.grid, "Grid size WxH");
  m->add_option("--h", mini.h, "Cell size (default 1/max(W, H))");
  m->add_option("--sweeps", mini.sweeps, "Proposals per temperature, in active-cell units");
  m->add_option("--cool", mini.cool, "Geometric cooling factor");
  m->add_option("--lambda", mini.lambda, "Area penalty weight (0 = default)");
  m->add_flag("--single", mini.single, "Only the n-region run, not the sequence 1..n");

  ExponentOptions expo;
  auto* e = app.add_subcommand("exponent", "Apollonian packing exponent");
  e->add_option("--fine", expo.fine, "Fine radius cutoff");
  e->add_option("--coarse", expo.coarse, "Coarse radius cutoff");
  e->add_option("--tolerance", expo.tolerance, "Largest accepted bracket width");

  std::vector<std::string> report_inputs;
  auto* r = app.add_subcommand("report", "Summarize output files");
  r->add_option("inputs", report_inputs, "Command output JSON files");

  std::string render_input;
  auto* rd = app.add_subcommand("render", "Render a cluster or minimize output to SVG");
  rd->add_option("input", render_input, "Cluster or minimize JSON")->required();

  std::string replay_input;
  auto* rp = app.add_subcommand("replay", "Rerun a manifest and compare outputs");
  rp->add_option("manifest", replay_input, "Manifest JSON")->required();

  for (auto* sub : {g, p, m, e, r, rd, rp}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  if (*rp) return run_replay(run, replay_input);

  run.manifest.command = app.get_subcommands().front()->get_name();
  run.manifest.seed = run.g.seed;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--manifest") {
      ++k;
      continue;
    }
    if (args[k].rfind("--manifest=", 0) == 0) continue;
    run.manifest.arguments.push_back(args[k]);
  }

  if (*g) run_gen(run, gen);
  if (*p) run_perim(run, perim);
  if (*m) run_minimize(run, mini);
  if (*e) run_exponent(run, expo);
  if (*r) {
    std::vector<json> docs;
    for (const auto& path : report_inputs) docs.push_back(run.read_json(path));
    run.emit_json(cl::build_report(docs));
  }
  if (*rd) run_render(run, render_input);

  if (!run.g.manifest.empty()) cl::write_text_file(run.g.manifest, cl::dump(cl::manifest_to_json(run.manifest)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(std::vector<std::string>(argv + 1, argv + argc));
  } catch (const cl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
