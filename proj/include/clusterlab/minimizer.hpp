#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "clusterlab/errors.hpp"
#include "clusterlab/geometry.hpp"
#include "clusterlab/grid.hpp"
#include "clusterlab/marching_squares.hpp"
#include "clusterlab/random.hpp"

namespace clusterlab {

struct GridSpec {
  int width = 256;
  int height = 256;
  double h = 1.0 / 256;
  Vec2 origin;

  double domain_area() const { return width * h * height * h; }
};

/// Zero for initial_temperature or lambda selects the default.
struct AnnealConfig {
  double initial_temperature = 0.0;  // default: one cell width of interface
  double final_temperature = 0.0;    // default: initial / 200
  double cooling = 0.97;
  double sweeps_per_temperature = 16.0;  // proposals per level, in units of the active-cell count
  double lambda = 0.0;
  double area_tolerance = 0.01;
  std::uint64_t seed = 1;
};

struct MinimizeResult {
  GridCluster grid;
  double p_estimate = 0.0;
  std::vector<double> area_errors;  // |A_k - a_k| / a_k, 0 for empty targets
  std::vector<double> region_perimeters;
  bool success = false;
  bool boundary_connected = false;
  int boundary_components = 0;
  int triple_points = 0;
  double energy = 0.0;
  std::vector<double> best_energy_trace;  // best energy after each temperature level
  AnnealConfig config;                    // with defaults resolved
  long proposals = 0;
  long accepted = 0;
};

/// Cells within this distance of the grid edge stay external.
inline constexpr int frozen_border = 3;

namespace detail {

class Annealer {
 public:
  Annealer(GridCluster& g, double lambda) : g_(g), lambda_(lambda), w_(g.width), hgt_(g.height) {
    counts_ = g_.counts();
    plaq_.assign(static_cast<std::size_t>(w_ + 1) * (hgt_ + 1), 0.0);
    subres_.assign(g_.labels.size(), 0);
    active_pos_.assign(g_.labels.size(), -1);
    for (int j = -1; j < hgt_; ++j)
      for (int i = -1; i < w_; ++i) plaq_[pidx(i, j)] = ms::plaquette_interface(g_.view(), i, j);
    for (int j = 0; j < hgt_; ++j)
      for (int i = 0; i < w_; ++i) {
        subres_[g_.index(i, j)] = ms::is_subresolution(g_.view(), i, j);
        refresh_active(i, j);
      }
    energy_ = full_energy();
  }

  double energy() const { return energy_; }
  std::size_t active_count() const { return active_.size(); }

  /// Exact energy from scratch: h * interface + lambda * area error + h * dust.
  double full_energy() const {
    double len = 0.0;
    for (double p : plaq_) len += p;
    long dust = 0;
    for (auto d : subres_) dust += d;
    return g_.h * len + area_penalty() + g_.h * static_cast<double>(dust);
  }

  double area_penalty() const {
    const double a = g_.h * g_.h;
    double pen = 0.0;
    for (std::size_t k = 1; k < counts_.size(); ++k) pen += std::abs(counts_[k] * a - g_.targets[k - 1]);
    return lambda_ * pen;
  }

  /// One Metropolis proposal; returns true if accepted.
  bool step(std::mt19937_64& rng, double temperature) {
    if (active_.empty()) return false;
    const int cell = active_[uniform_index(rng, active_.size())];
    const int i = cell % w_, j = cell / w_;
    const std::uint8_t old = g_.labels[cell];
    std::uint8_t options[4];
    int n_opt = 0;
    for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
      const std::uint8_t l = g_.at(i + di, j + dj);
      if (l == old) continue;
      bool seen = false;
      for (int k = 0; k < n_opt; ++k) seen = seen || options[k] == l;
      if (!seen) options[n_opt++] = l;
    }
    const std::uint8_t next = options[uniform_index(rng, static_cast<std::uint64_t>(n_opt))];
    const double delta = apply(i, j, next);
    if (delta <= 0.0 || unit_uniform(rng) < std::exp(-delta / temperature)) {
      commit(i, j);
      return true;
    }
    revert(i, j, old);
    return false;
  }

  void resync() { energy_ = full_energy(); }

 private:
  std::size_t pidx(int i, int j) const { return static_cast<std::size_t>(j + 1) * (w_ + 1) + (i + 1); }

  bool movable(int i, int j) const {
    return i >= frozen_border && j >= frozen_border && i < w_ - frozen_border && j < hgt_ - frozen_border;
  }

  void refresh_active(int i, int j) {
    if (i < 0 || j < 0 || i >= w_ || j >= hgt_) return;
    const int c = static_cast<int>(g_.index(i, j));
    const bool want = movable(i, j) && is_boundary_cell(g_, i, j);
    const int pos = active_pos_[c];
    if (want && pos < 0) {
      active_pos_[c] = static_cast<int>(active_.size());
      active_.push_back(c);
    } else if (!want && pos >= 0) {
      const int last = active_.back();
      active_[pos] = last;
      active_pos_[last] = pos;
      active_.pop_back();
      active_pos_[c] = -1;
    }
  }

  /// Sets the label and returns the energy change, keeping the new local
  /// terms in scratch buffers until commit or revert.
  double apply(int i, int j, std::uint8_t next) {
    const std::size_t c = g_.index(i, j);
    const std::uint8_t old = g_.labels[c];
    g_.labels[c] = next;
    const double a = g_.h * g_.h;
    const double before_area = std::abs(counts_[old] * a - (old ? g_.targets[old - 1] : 0.0)) * (old != 0) +
                               std::abs(counts_[next] * a - (next ? g_.targets[next - 1] : 0.0)) * (next != 0);
    const double after_area = std::abs((counts_[old] - 1) * a - (old ? g_.targets[old - 1] : 0.0)) * (old != 0) +
                              std::abs((counts_[next] + 1) * a - (next ? g_.targets[next - 1] : 0.0)) * (next != 0);
    double d_len = 0.0;
    int k = 0;
    for (int y = j - 2; y <= j + 1; ++y)
      for (int x = i - 2; x <= i + 1; ++x, ++k) {
        scratch_plaq_[k] = ms::plaquette_interface(g_.view(), x, y);
        d_len += scratch_plaq_[k] - plaq_[pidx(x, y)];
      }
    int d_dust = 0;
    k = 0;
    for (int y = j - 1; y <= j + 1; ++y)
      for (int x = i - 1; x <= i + 1; ++x, ++k) {
        if (x < 0 || y < 0 || x >= w_ || y >= hgt_) continue;
        scratch_sub_[k] = ms::is_subresolution(g_.view(), x, y);
        d_dust += scratch_sub_[k] - subres_[g_.index(x, y)];
      }
    pending_delta_ = g_.h * d_len + lambda_ * (after_area - before_area) + g_.h * d_dust;
    pending_old_ = old;
    return pending_delta_;
  }

  void commit(int i, int j) {
    const std::uint8_t next = g_.labels[g_.index(i, j)];
    --counts_[pending_old_];
    ++counts_[next];
    int k = 0;
    for (int y = j - 2; y <= j + 1; ++y)
      for (int x = i - 2; x <= i + 1; ++x, ++k) plaq_[pidx(x, y)] = scratch_plaq_[k];
    k = 0;
    for (int y = j - 1; y <= j + 1; ++y)
      for (int x = i - 1; x <= i + 1; ++x, ++k)
        if (x >= 0 && y >= 0 && x < w_ && y < hgt_) subres_[g_.index(x, y)] = scratch_sub_[k];
    energy_ += pending_delta_;
    refresh_active(i, j);
    refresh_active(i + 1, j);
    refresh_active(i - 1, j);
    refresh_active(i, j + 1);
    refresh_active(i, j - 1);
  }

  void revert(int i, int j, std::uint8_t old) { g_.labels[g_.index(i, j)] = old; }

  GridCluster& g_;
  double lambda_;
  int w_, hgt_;
  std::vector<long> counts_;
  std::vector<double> plaq_;
  std::vector<std::uint8_t> subres_;
  std::vector<int> active_;
  std::vector<int> active_pos_;
  double energy_ = 0.0;
  double scratch_plaq_[16] = {};
  std::uint8_t scratch_sub_[9] = {};
  double pending_delta_ = 0.0;
  std::uint8_t pending_old_ = 0;
};

/// Places each region as a near-square block, largest first, at the free
/// position closest to the domain centre.
inline void initial_blocks(GridCluster& g) {
  const int w = g.width, h = g.height;
  std::vector<std::size_t> order(g.targets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return g.targets[a] > g.targets[b]; });
  for (std::size_t k : order) {
    const long cells = std::lround(g.targets[k] / (g.h * g.h));
    if (cells == 0) continue;
    // Prefix sums of occupied cells.
    std::vector<long> ps(static_cast<std::size_t>(w + 1) * (h + 1), 0);
    auto P = [&](int i, int j) -> long& { return ps[static_cast<std::size_t>(j) * (w + 1) + i]; };
    for (int j = 0; j < h; ++j)
      for (int i = 0; i < w; ++i) P(i + 1, j + 1) = P(i, j + 1) + P(i + 1, j) - P(i, j) + (g.labels[g.index(i, j)] != 0);
    const double cx = 0.5 * w, cy = 0.5 * h;
    int bi = -1, bj = -1, bw = 0, bh = 0;
    // Square first; elongate only if no square slot is free.
    for (double aspect : {1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0}) {
      double best = std::numeric_limits<double>::infinity();
      const int side = std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(cells) / aspect))));
      const int other = static_cast<int>((cells + side - 1) / side);
      for (auto [cw, ch] : {std::pair{side, other}, std::pair{other, side}})
        for (int j = frozen_border; j + ch <= h - frozen_border; ++j)
          for (int i = frozen_border; i + cw <= w - frozen_border; ++i) {
            if (P(i + cw, j + ch) - P(i, j + ch) - P(i + cw, j) + P(i, j) != 0) continue;
            const double dx = i + 0.5 * cw - cx, dy = j + 0.5 * ch - cy;
            const double d = dx * dx + dy * dy;
            if (d < best) {
              best = d;
              bi = i;
              bj = j;
              bw = cw;
              bh = ch;
            }
          }
      if (bi >= 0) break;
    }
    if (bi < 0) throw Error(ErrorCode::invalid_argument, "region " + std::to_string(k + 1) + " does not fit the grid");
    long placed = 0;
    for (int j = bj; j < bj + bh; ++j)
      for (int i = bi; i < bi + bw && placed < cells; ++i, ++placed) g.labels[g.index(i, j)] = static_cast<std::uint8_t>(k + 1);
  }
}

inline double initial_interface(const GridCluster& g) { return g.perimeter(); }

}  // namespace detail

/// Annealed approximation of a minimal cluster with the given areas on a
/// pixel grid. Moves relabel a cell bordering another label with one of its
/// neighbours' labels. The energy is the smoothed marching-squares interface
/// length plus lambda times the total area error, plus h per cell too thin
/// to register in the smoothed field (which would otherwise hide area).
inline MinimizeResult minimize_n_cluster(const std::vector<double>& areas, const GridSpec& spec,
                                         AnnealConfig cfg = {}) {
  if (areas.empty()) throw Error(ErrorCode::invalid_argument, "no areas given");
  if (areas.size() > 250) throw Error(ErrorCode::invalid_argument, "at most 250 regions");
  if (spec.width < 128 || spec.height < 128) throw Error(ErrorCode::invalid_argument, "grid must be at least 128x128");
  if (!(spec.h > 0.0)) throw Error(ErrorCode::invalid_argument, "cell size must be positive");
  double total = 0.0;
  for (std::size_t k = 0; k < areas.size(); ++k) {
    if (!(areas[k] >= 0.0) || !std::isfinite(areas[k]))
      throw Error(ErrorCode::invalid_argument, "area at index " + std::to_string(k) + " must be nonnegative");
    total += areas[k];
  }
  if (!(total > 0.0)) throw Error(ErrorCode::invalid_argument, "areas sum to zero");
  if (total > 0.8 * spec.domain_area())
    throw Error(ErrorCode::invalid_argument, "areas exceed 0.8 of the domain area");
  if (!(cfg.cooling > 0.0 && cfg.cooling < 1.0)) throw Error(ErrorCode::invalid_argument, "cooling must lie in (0, 1)");
  if (cfg.lambda < 0.0 || cfg.initial_temperature < 0.0 || cfg.final_temperature < 0.0 || !(cfg.sweeps_per_temperature > 0.0))
    throw Error(ErrorCode::invalid_argument, "annealing parameters must be positive");

  GridCluster g;
  g.width = spec.width;
  g.height = spec.height;
  g.h = spec.h;
  g.origin = spec.origin;
  g.labels.assign(static_cast<std::size_t>(g.width) * g.height, 0);
  g.targets = areas;
  detail::initial_blocks(g);

  if (cfg.lambda == 0.0) {
    // Above the slope of the isoperimetric profile of every region, so the
    // penalty minimum sits at the target areas.
    double slope = 0.0;
    for (double a : areas)
      if (a > 0.0) slope = std::max(slope, std::sqrt(pi / a));
    cfg.lambda = std::max(10.0 * detail::initial_interface(g) / spec.domain_area(), 2.0 * slope);
  }
  if (cfg.initial_temperature == 0.0) cfg.initial_temperature = spec.h;
  if (cfg.final_temperature == 0.0) cfg.final_temperature = cfg.initial_temperature / 200.0;

  MinimizeResult res;
  res.config = cfg;
  detail::Annealer ann(g, cfg.lambda);
  std::mt19937_64 rng(mix_seed(cfg.seed));
  GridCluster best = g;
  double best_energy = ann.energy();
  for (double t = cfg.initial_temperature; t >= cfg.final_temperature; t *= cfg.cooling) {
    const long n = std::max<long>(1, std::lround(cfg.sweeps_per_temperature * static_cast<double>(ann.active_count())));
    for (long k = 0; k < n; ++k) {
      ++res.proposals;
      res.accepted += ann.step(rng, t);
    }
    ann.resync();
    if (ann.energy() < best_energy) {
      best_energy = ann.energy();
      best.labels = g.labels;
    }
    if (!res.best_energy_trace.empty() && best_energy > res.best_energy_trace.back())
      throw std::logic_error("best energy increased");
    res.best_energy_trace.push_back(best_energy);
  }
  res.grid = std::move(best);
  res.energy = best_energy;
  res.p_estimate = res.grid.perimeter();
  const auto got = res.grid.areas();
  res.success = true;
  for (std::size_t k = 0; k < areas.size(); ++k) {
    const double err = areas[k] > 0.0 ? std::abs(got[k] - areas[k]) / areas[k] : (got[k] > 0.0 ? 1.0 : 0.0);
    res.area_errors.push_back(err);
    res.success = res.success && err <= cfg.area_tolerance;
    res.region_perimeters.push_back(areas[k] > 0.0 ? label_field_perimeter(res.grid.mask(static_cast<int>(k + 1)).view(), g.h) : 0.0);
  }
  const auto conn = boundary_connectivity(res.grid);
  res.boundary_connected = conn.connected;
  res.boundary_components = conn.components;
  res.triple_points = triple_points(res.grid);
  return res;
}

struct PSequence {
  std::vector<MinimizeResult> runs;
  std::vector<double> p;
  std::vector<double> hausdorff;  // between successive boundaries, centroids aligned
  double p_bar = 0.0;             // 2 sqrt(pi) sum_k sqrt(a_k), whole sequence
  bool monotone = false;          // p_n >= p_{n-1} (1 - slack)
  bool bounded = false;           // p_n <= p_bar (1 + bound_slack)
};

inline constexpr double p_monotone_slack = 0.02;
inline constexpr double p_bound_slack = 0.03;

/// Minimal-cluster estimates for the prefixes a_1..a_n, n = 1..n_max.
/// `sqrt_tail` is sum_{k > areas.size()} sqrt(a_k) for the full sequence.
inline PSequence p_sequence(const std::vector<double>& areas, double sqrt_tail, int n_max, const GridSpec& spec,
                            const AnnealConfig& cfg = {}) {
  if (n_max < 1) throw Error(ErrorCode::invalid_argument, "n_max must be at least 1");
  if (areas.size() < static_cast<std::size_t>(n_max))
    throw Error(ErrorCode::invalid_argument, "area list shorter than n_max");
  PSequence out;
  double root_sum = sqrt_tail;
  for (double a : areas) root_sum += std::sqrt(a);
  out.p_bar = 2.0 * std::sqrt(pi) * root_sum;
  out.monotone = out.bounded = true;
  for (int n = 1; n <= n_max; ++n) {
    AnnealConfig c = cfg;
    c.seed = mix_seed(cfg.seed ^ static_cast<std::uint64_t>(n));
    MinimizeResult r = minimize_n_cluster(std::vector<double>(areas.begin(), areas.begin() + n), spec, c);
    if (!out.p.empty()) {
      out.monotone = out.monotone && r.p_estimate >= out.p.back() * (1.0 - p_monotone_slack);
      out.hausdorff.push_back(aligned_boundary_hausdorff(out.runs.back().grid, r.grid));
    }
    out.bounded = out.bounded && r.p_estimate <= out.p_bar * (1.0 + p_bound_slack);
    out.p.push_back(r.p_estimate);
    out.runs.push_back(std::move(r));
  }
  return out;
}

}  // namespace clusterlab
