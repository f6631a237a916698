// Runs the ten acceptance criteria and prints one PASS/FAIL line each.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <sys/wait.h>

#include "clusterlab/clusterlab.hpp"

namespace cl = clusterlab;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::string num(double v, int digits = 6) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

// Criterion 1.
Outcome half_sum_identity() {
  double worst = 0.0;
  auto track = [&](const cl::Cluster& c) {
    worst = std::max(worst, rel(cl::interface_length(cl::extract_mesh(c)), cl::cluster_perimeter(c)));
  };
  for (int depth = 1; depth <= 5; ++depth) track(cl::build_square_gasket(cl::square_gasket_areas(depth)));
  track(cl::build_double_bubble(0.05));
  for (int depth = 1; depth <= 12; ++depth) track(cl::build_cantor_cluster(depth).cluster);
  return {worst <= 1e-10, "worst relative mismatch " + num(worst, 3)};
}

cl::Cluster random_exact_cluster(std::mt19937_64& rng) {
  constexpr int n = 6;
  std::vector<int> owner(n * n, -1);
  cl::Cluster c;
  std::uniform_int_distribution<int> cell(0, n - 1), span(1, 2), coin(0, 3);
  std::uniform_real_distribution<double> radius(0.1, 0.5);
  for (int tries = 0; tries < 30 && c.size() < 12; ++tries) {
    const int i = cell(rng), j = cell(rng);
    if (coin(rng) == 0) {
      if (owner[j * n + i] >= 0) continue;
      owner[j * n + i] = static_cast<int>(c.size());
      c.regions.push_back(cl::Disk{{i + 0.5, j + 0.5}, radius(rng)});
      continue;
    }
    const int w = std::min(span(rng), n - i), h = std::min(span(rng), n - j);
    bool free = true;
    for (int y = j; y < j + h; ++y)
      for (int x = i; x < i + w; ++x) free = free && owner[y * n + x] < 0;
    if (!free) continue;
    for (int y = j; y < j + h; ++y)
      for (int x = i; x < i + w; ++x) owner[y * n + x] = static_cast<int>(c.size());
    c.regions.push_back(cl::AxisRect{{double(i), double(j)}, {double(i + w), double(j + h)}});
  }
  return c;
}

std::vector<std::uint8_t> random_mask(std::mt19937_64& rng) {
  std::vector<std::uint8_t> m(64 * 64, 0);
  std::uniform_int_distribution<int> pos(0, 63), size(1, 20);
  for (int k = 0; k < 6; ++k) {
    const int x = pos(rng), y = pos(rng), sw = size(rng), sh = size(rng);
    for (int j = y; j < std::min(64, y + sh); ++j)
      for (int i = x; i < std::min(64, x + sw); ++i) m[j * 64 + i] = 1;
  }
  for (int k = 0; k < 40; ++k) m[pos(rng) * 64 + pos(rng)] ^= 1;
  return m;
}

// Criterion 2.
Outcome truncation_and_submodularity() {
  std::mt19937_64 rng(20240601);
  int violations = 0;
  for (int t = 0; t < 100; ++t) {
    const cl::Cluster c = random_exact_cluster(rng);
    std::vector<double> p;
    for (std::size_t n = 1; n <= c.size(); ++n) p.push_back(cl::cluster_perimeter(cl::truncate(c, n)));
    for (std::size_t n = 0; n < p.size(); ++n)
      for (std::size_t m = n; m < p.size(); ++m) violations += p[n] > p[m] + 1e-10 * p.back();
  }
  int sub_fail = 0;
  auto per = [](const std::vector<std::uint8_t>& m) { return cl::edge_count_perimeter(cl::LabelView{m, 64, 64}); };
  for (int t = 0; t < 1000; ++t) {
    const auto a = random_mask(rng), b = random_mask(rng);
    std::vector<std::uint8_t> u(a.size()), x(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      u[k] = a[k] | b[k];
      x[k] = a[k] & b[k];
    }
    sub_fail += per(u) + per(x) > per(a) + per(b);
  }
  return {violations == 0 && sub_fail == 0,
          std::to_string(violations) + " truncation violations, " + std::to_string(sub_fail) + " submodularity violations"};
}

// The minimizer runs shared by criteria 3 and 7.
struct MinimizerRuns {
  cl::MinimizeResult single;
  cl::MinimizeResult pair;
  cl::PSequence sequence;
  double seconds = 0.0;
};

const MinimizerRuns& minimizer_runs() {
  static const MinimizerRuns runs = [] {
    const auto t0 = std::chrono::steady_clock::now();
    MinimizerRuns r;
    cl::GridSpec grid;
    cl::AnnealConfig cfg;
    r.single = cl::minimize_n_cluster({0.04 * cl::pi}, grid, cfg);
    r.pair = cl::minimize_n_cluster({0.05, 0.05}, grid, cfg);
    std::vector<double> areas;
    for (int k = 1; k <= 4; ++k) areas.push_back(std::ldexp(1.0, -2 * k));
    double tail = 0.0;
    for (int k = 5; k < 80; ++k) tail += std::ldexp(1.0, -k);
    r.sequence = cl::p_sequence(areas, tail, 4, grid, cfg);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }();
  return runs;
}

// Criterion 3.
Outcome minimizer_diameter() {
  const auto& runs = minimizer_runs();
  std::vector<const cl::MinimizeResult*> all{&runs.single, &runs.pair};
  for (const auto& r : runs.sequence.runs) all.push_back(&r);
  int checked = 0, bad = 0;
  double worst = 0.0;
  for (const auto* r : all) {
    if (!r->boundary_connected) continue;
    ++checked;
    const double ratio = cl::grid_boundary_diameter(r->grid) / r->p_estimate;
    worst = std::max(worst, ratio);
    bad += ratio > 1.02;
  }
  return {checked > 0 && bad == 0, std::to_string(checked) + " connected runs, max diam/p " + num(worst, 4)};
}

// Criterion 4.
Outcome apollonian_generator() {
  const auto nodes = cl::generate_apollonian(1e-3);
  const double residual = cl::max_descartes_residual(nodes);
  const double tangency = cl::max_tangency_error(nodes);
  const double cover = cl::coverage(cl::apollonian_disks(cl::generate_apollonian(1e-4)));
  return {residual <= 1e-9 && tangency <= 1e-9 && cover >= 0.95,
          std::to_string(nodes.size()) + " disks, Descartes " + num(residual, 3) + ", tangency " + num(tangency, 3) +
              ", coverage " + num(cover)};
}

// Criterion 5.
Outcome exponent_bracket() {
  const auto disks = cl::apollonian_disks(cl::generate_apollonian(1e-4));
  const auto one = cl::series_growth(disks, 1.0, 1e-2, 1e-4);
  const auto sub = cl::series_growth(disks, 1.4, 1e-2, 1e-4);
  const auto e = cl::estimate_packing_exponent(disks, 0.05, 1e-3, 1e-4);
  const bool ok_one = one.factor >= 1.5;
  const bool ok_sub = std::abs(sub.factor - 1.0) < 0.05;
  const bool ok_alpha = e.alpha_hat >= 1.25 && e.alpha_hat <= 1.40 && e.alpha_hi - e.alpha_lo <= 0.05;
  return {ok_one && ok_sub && ok_alpha, "sum r grows x" + num(one.factor, 4) + (ok_one ? "" : " (FAIL)") +
                                            ", sum r^1.4 grows x" + num(sub.factor, 4) + (ok_sub ? "" : " (FAIL)") +
                                            ", alpha " + num(e.alpha_hat) + " in [" + num(e.alpha_lo) + ", " +
                                            num(e.alpha_hi) + "]" + (ok_alpha ? "" : " (FAIL)")};
}

// Criterion 6.
Outcome fractional_perimeter() {
  const cl::FractionalOrder s(0.5);
  const auto p1 = cl::fractional_perimeter_mc(cl::Disk{{0, 0}, 1.0}, s, 1000000, 11);
  const auto p2 = cl::fractional_perimeter_mc(cl::Disk{{0, 0}, 2.0}, s, 1000000, 12);
  const double k = std::pow(2.0, 1.5);
  const double dev = std::abs(p2.value - k * p1.value);
  const double se = std::sqrt(p2.standard_error * p2.standard_error + k * k * p1.standard_error * p1.standard_error);
  const bool ok_ratio = dev <= 3.0 * se;

  std::vector<double> values;
  for (double cut : {1e-2, 1e-3, 1e-4})
    values.push_back(
        cl::fractional_cluster_perimeter(cl::apollonian_cluster(cl::generate_apollonian(cut)), s, {}, 200000, 13).value);
  double worst = 0.0;
  std::string steps;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double change = rel(values[i], values[i - 1]);
    worst = std::max(worst, change);
    steps += (i > 1 ? ", " : "") + num(100.0 * change, 3) + "%";
  }
  const bool ok_cauchy = worst < 0.05;
  return {ok_ratio && ok_cauchy, "ratio " + num(p2.value / p1.value) + " off by " + num(dev / se, 3) + " SE" +
                                     (ok_ratio ? "" : " (FAIL)") + "; cluster changes per decade " + steps +
                                     (ok_cauchy ? "" : " (FAIL)")};
}

// Criterion 7.
Outcome minimizer_closed_forms() {
  const auto& runs = minimizer_runs();
  const double a1 = 0.04 * cl::pi;
  const double e1 = rel(runs.single.p_estimate, 2.0 * std::sqrt(cl::pi * a1));
  const double e2 = rel(runs.pair.p_estimate, cl::double_bubble_perimeter(0.05));
  const auto& seq = runs.sequence;
  bool connected = true;
  for (const auto& r : seq.runs) connected = connected && (!r.success || r.boundary_connected);
  connected = connected && runs.single.boundary_connected && runs.pair.boundary_connected;
  std::string ps;
  for (double p : seq.p) ps += (ps.empty() ? "" : ", ") + num(p, 5);
  const bool ok = e1 <= 0.03 && e2 <= 0.05 && seq.p.size() == 4 && seq.monotone && seq.bounded && connected;
  return {ok, "N=1 off " + num(100 * e1, 3) + "%, N=2 off " + num(100 * e2, 3) + "%, p = [" + ps + "] bound " +
                  num(1.03 * seq.p_bar, 5) + (connected ? ", connected" : ", DISCONNECTED") + ", " +
                  num(runs.seconds, 3) + " s in the minimizer"};
}

// Criterion 8.
Outcome cantor_gap() {
  bool positive = true;
  for (int depth = 1; depth <= 12; ++depth) positive = positive && cl::build_cantor_cluster(depth).gap > 0.0;
  const double gap = cl::build_cantor_cluster(12).gap;
  // The default schedule removes 1/4 + 2/16 + 4/64 + ... = 1/2 of |S| = 1.
  const double e = rel(gap, 0.5);
  return {positive && e <= 0.01, "depth-12 gap " + num(gap, 8) + ", off " + num(100 * e, 3) + "%"};
}

// Criterion 9.
Outcome anisotropic_exactness() {
  const cl::Norm manhattan = cl::Norm::manhattan();
  double worst = 0.0;
  bool floors = true;
  for (int depth = 1; depth <= 5; ++depth) {
    const auto areas = cl::square_gasket_areas(depth);
    const cl::Cluster c = cl::build_square_gasket(areas);
    double sides = 0.0;
    for (std::size_t k = 0; k < areas.size(); ++k) {
      sides += 4.0 * std::sqrt(areas[k]);
      floors = floors && cl::anisotropic_perimeter(c.regions[k], manhattan) == 4.0 * std::sqrt(areas[k]);
    }
    worst = std::max(worst, std::abs(cl::anisotropic_cluster_perimeter(c, manhattan) - 0.5 * (4.0 + sides)));
  }
  return {worst <= 1e-12 && floors, "max deviation " + num(worst, 3) + (floors ? ", Wulff floors exact" : ", Wulff floor missed")};
}

std::string slurp(const std::filesystem::path& p) { return cl::read_text_file(p.string()); }

int run_tool(const std::string& args) {
  const std::string cmd = std::string("\"") + CLUSTER_LAB_EXE + "\" " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return status == -1 ? -1 : WEXITSTATUS(status);
}

// Criterion 10.
Outcome replay_determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "clusterlab_acceptance";
  std::filesystem::create_directories(dir);
  const std::string d = dir.string() + "/";
  struct Job {
    std::string name, args;
  };
  const std::vector<Job> jobs{
      {"gen", "--seed 3 --out " + d + "squares.json gen squares --depth 3"},
      {"frac", "--seed 5 --out " + d + "frac.json perim " + d + "squares.json --functional frac --samples 20000"},
      {"minimize", "--seed 9 --out " + d + "min.json minimize --areas list:0.05 --grid 128x128 --sweeps 2 --single"},
      {"exponent", "--seed 1 --out " + d + "exp.json exponent"},
  };
  std::string failures;
  for (const auto& job : jobs) {
    const std::string manifest = d + job.name + ".manifest.json";
    if (run_tool(job.args + " --manifest " + manifest) != 0) {
      failures += " " + job.name + "(run)";
      continue;
    }
    const auto out = cl::manifest_from_json(cl::parse_json_text(slurp(manifest), manifest)).outputs;
    std::vector<std::string> first, second;
    const bool r1 = run_tool("replay " + manifest) == 0;
    for (const auto& o : out) first.push_back(slurp(o.path));
    const bool r2 = run_tool("replay " + manifest) == 0;
    for (const auto& o : out) second.push_back(slurp(o.path));
    if (!r1 || !r2 || first != second || out.empty()) failures += " " + job.name;
  }
  std::filesystem::remove_all(dir);
  return {failures.empty(), failures.empty() ? std::to_string(jobs.size()) + " manifests replayed twice, byte-identical"
                                             : "mismatch:" + failures};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "half-sum identity", 1.0, half_sum_identity},
      {2, "truncation and submodularity", 10.0, truncation_and_submodularity},
      {3, "minimizer diameter bound", 600.0, minimizer_diameter},
      {4, "Apollonian generator", 30.0, apollonian_generator},
      {5, "packing exponent bracket", 120.0, exponent_bracket},
      {6, "fractional perimeter", 120.0, fractional_perimeter},
      {7, "minimizer closed forms", 600.0, minimizer_closed_forms},
      {8, "Cantor gap", 60.0, cantor_gap},
      {9, "anisotropic exactness", 60.0, anisotropic_exactness},
      {10, "replay determinism", 600.0, replay_determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_seconds;
    if (!in_time) o.detail += "; over the " + num(c.budget_seconds) + " s budget";
    const bool pass = o.passed && in_time;
    failed += !pass;
    std::printf("%s criterion %d (%s): %s [%.2f s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
