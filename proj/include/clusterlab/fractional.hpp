#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

#include "clusterlab/cluster.hpp"
#include "clusterlab/errors.hpp"
#include "clusterlab/geometry.hpp"
#include "clusterlab/random.hpp"
#include "clusterlab/region.hpp"

namespace clusterlab {

/// Order s of the kernel |x - y|^{-(2+s)}. Restricted to (0, 1): for s >= 1
/// every set with a rectifiable boundary arc has infinite P_s.
struct FractionalOrder {
  double s = 0.5;

  explicit FractionalOrder(double value) : s(value) {
    if (!(s > 0.0 && s < 1.0))
      throw Error(ErrorCode::invalid_argument, "fractional order must lie in (0, 1)");
  }
};

struct McEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

inline constexpr std::uint64_t min_mc_samples = 10000;
/// Seed and sample count behind the cached disk constant C(s).
inline constexpr std::uint64_t disk_constant_seed = 0x0c1a57e4b0b5eedULL;
inline constexpr std::uint64_t disk_constant_samples = 10000000;

struct Line {
  Vec2 origin;  // foot point of the normal from the sampling centre
  Vec2 dir;     // unit direction
  double at(Vec2 x) const { return dot(x - origin, dir); }
};

struct Interval {
  double lo;
  double hi;
};

namespace detail {

inline void slab(double o, double d, double lo, double hi, double& t0, double& t1) {
  if (d == 0.0) {
    if (o <= lo || o >= hi) t1 = t0 - 1.0;
    return;
  }
  double a = (lo - o) / d, b = (hi - o) / d;
  if (a > b) std::swap(a, b);
  t0 = std::max(t0, a);
  t1 = std::min(t1, b);
}

/// Parameter range of the line inside a box; empty when t0 >= t1.
inline Interval clip_to_box(const Line& l, const Box& b) {
  double t0 = -std::numeric_limits<double>::infinity(), t1 = std::numeric_limits<double>::infinity();
  slab(l.origin.x, l.dir.x, b.xmin, b.xmax, t0, t1);
  slab(l.origin.y, l.dir.y, b.ymin, b.ymax, t0, t1);
  return {t0, t1};
}

/// Visits the cells of an nx-by-ny grid over `box` crossed by the line, in
/// order, with the parameter range inside each cell.
template <class Fn>
void traverse_grid(const Line& l, const Box& box, int nx, int ny, Fn&& fn) {
  const Interval span = clip_to_box(l, box);
  if (!(span.lo < span.hi)) return;
  const double cw = box.width() / nx, ch = box.height() / ny;
  const Vec2 entry = l.origin + span.lo * l.dir;
  int i = std::clamp(static_cast<int>((entry.x - box.xmin) / cw), 0, nx - 1);
  int j = std::clamp(static_cast<int>((entry.y - box.ymin) / ch), 0, ny - 1);
  const int si = l.dir.x > 0 ? 1 : -1, sj = l.dir.y > 0 ? 1 : -1;
  const double inf = std::numeric_limits<double>::infinity();
  auto next_x = [&](int ci) {
    if (l.dir.x == 0.0) return inf;
    const double x = box.xmin + (si > 0 ? ci + 1 : ci) * cw;
    return (x - l.origin.x) / l.dir.x;
  };
  auto next_y = [&](int cj) {
    if (l.dir.y == 0.0) return inf;
    const double y = box.ymin + (sj > 0 ? cj + 1 : cj) * ch;
    return (y - l.origin.y) / l.dir.y;
  };
  double t = span.lo;
  while (true) {
    const double tx = next_x(i), ty = next_y(j);
    const double t_exit = std::min({tx, ty, span.hi});
    if (t_exit > t) fn(i, j, t, t_exit);
    t = std::max(t, t_exit);
    if (t_exit >= span.hi) break;
    if (tx <= ty) {
      i += si;
      if (i < 0 || i >= nx) break;
    } else {
      j += sj;
      if (j < 0 || j >= ny) break;
    }
  }
}

/// Sorts and merges intervals that overlap or touch within `tol`.
inline void merge_intervals(std::vector<Interval>& v, double tol) {
  if (v.empty()) return;
  std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::size_t k = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i].lo <= v[k].hi + tol)
      v[k].hi = std::max(v[k].hi, v[i].hi);
    else
      v[++k] = v[i];
  }
  v.resize(k + 1);
}

inline void edge_line_params(const Edge& e, const Line& l, std::vector<double>& out) {
  const Vec2 n{-l.dir.y, l.dir.x};
  if (!e.is_arc()) {
    const double da = dot(e.from - l.origin, n), db = dot(e.to - l.origin, n);
    if ((da > 0.0) == (db > 0.0) && da != 0.0 && db != 0.0) return;
    if (da == db) return;  // parallel and on the line: measure zero
    const double w = da / (da - db);
    out.push_back(l.at(e.from + w * (e.to - e.from)));
    return;
  }
  const double r = e.radius();
  const double h = dot(e.center - l.origin, n);
  if (std::abs(h) >= r) return;
  const double tc = l.at(e.center);
  const double w = std::sqrt(r * r - h * h);
  const double a0 = e.start_angle();
  for (double t : {tc - w, tc + w}) {
    const Vec2 q = l.origin + t * l.dir;
    if (Edge::angle_in_sweep(a0, e.sweep, angle_of(q - e.center))) out.push_back(t);
  }
}

/// Parameter intervals where the line lies inside the region.
inline void chord_intervals(const PreparedRegion& pr, const Line& l, std::vector<Interval>& out) {
  const Region& region = *pr.region;
  if (auto d = std::get_if<Disk>(&region)) {
    const Vec2 n{-l.dir.y, l.dir.x};
    const double h = dot(d->center - l.origin, n);
    if (std::abs(h) >= d->radius) return;
    const double w = std::sqrt(d->radius * d->radius - h * h);
    const double tc = l.at(d->center);
    out.push_back({tc - w, tc + w});
    return;
  }
  if (auto r = std::get_if<AxisRect>(&region)) {
    Interval iv = clip_to_box(l, Box{r->min.x, r->min.y, r->max.x, r->max.y});
    if (iv.lo < iv.hi) out.push_back(iv);
    return;
  }
  if (auto m = std::get_if<PixelMask>(&region)) {
    const Box box = pr.box;
    const std::size_t first = out.size();
    traverse_grid(l, box, m->width, m->height, [&](int i, int j, double t0, double t1) {
      if (!m->at(i, j)) return;
      if (out.size() > first && out.back().hi >= t0) {
        out.back().hi = t1;
      } else {
        out.push_back({t0, t1});
      }
    });
    return;
  }
  const Interval span = clip_to_box(l, pr.box);
  if (!(span.lo < span.hi)) return;
  std::vector<double> ts;
  for (std::size_t k = 0; k < pr.loops.size(); ++k) {
    const Interval ls = clip_to_box(l, pr.loop_boxes[k]);
    if (!(ls.lo <= ls.hi)) continue;
    for (const Edge& e : pr.loops[k]) edge_line_params(e, l, ts);
  }
  if (ts.size() < 2) return;
  std::sort(ts.begin(), ts.end());
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    if (!(ts[k + 1] > ts[k])) continue;
    if (pr.contains(l.origin + (0.5 * (ts[k] + ts[k + 1])) * l.dir)) {
      if (!out.empty() && out.back().hi == ts[k])
        out.back().hi = ts[k + 1];
      else
        out.push_back({ts[k], ts[k + 1]});
    }
  }
}

/// Integral of |x - y|^{-1-s} over x in the intervals and y in the
/// complement on the line. Intervals must be sorted and disjoint.
inline double line_functional(const std::vector<Interval>& in, double s) {
  if (in.empty()) return 0.0;
  const double e = 1.0 - s;
  auto f = [e](double x) { return x > 0.0 ? std::pow(x, e) : 0.0; };
  const std::size_t m = in.size();
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double a = in[i].lo, b = in[i].hi;
    // Gaps to the right: [in[g].hi, in[g+1].lo], the last one unbounded.
    for (std::size_t g = i; g < m; ++g) {
      const double c = in[g].hi;
      total += f(c - a) - f(c - b);
      if (g + 1 < m) {
        const double d = in[g + 1].lo;
        total += f(d - b) - f(d - a);
      }
    }
    // Gaps to the left, mirrored.
    for (std::size_t g = i + 1; g-- > 0;) {
      const double c = in[g].lo;
      total += f(b - c) - f(a - c);
      if (g > 0) {
        const double d = in[g - 1].hi;
        total += f(a - d) - f(b - d);
      }
    }
  }
  return total / (s * e);
}

/// Shared line-sampling driver. Lines are drawn from the invariant measure
/// restricted to lines meeting the disk of radius `radius` about `centre`;
/// that set has measure 2 pi radius. `per_line` maps a line to its integral.
template <class PerLine>
McEstimate sample_lines(Vec2 centre, double radius, std::uint64_t samples, std::uint64_t seed, PerLine&& per_line) {
  constexpr std::uint64_t block = 1 << 16;
  const std::uint64_t blocks = (samples + block - 1) / block;
  std::vector<double> sum(blocks, 0.0), sum2(blocks, 0.0);
  auto run_block = [&](std::uint64_t b) {
    std::mt19937_64 rng(stream_seed(seed, b));
    const std::uint64_t n = std::min(block, samples - b * block);
    double s1 = 0.0, s2 = 0.0;
    for (std::uint64_t k = 0; k < n; ++k) {
      const double theta = pi * unit_uniform(rng);
      const double p = (2.0 * unit_uniform(rng) - 1.0) * radius;
      const Vec2 dir = unit_at(theta);
      const Line l{centre + p * Vec2{-dir.y, dir.x}, dir};
      const double v = per_line(l);
      s1 += v;
      s2 += v * v;
    }
    sum[b] = s1;
    sum2[b] = s2;
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), static_cast<unsigned>(blocks)));
  if (workers == 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::uint64_t b = w; b < blocks; b += workers) run_block(b);
      });
    for (auto& t : pool) t.join();
  }
  double s1 = 0.0, s2 = 0.0;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    s1 += sum[b];
    s2 += sum2[b];
  }
  const double n = static_cast<double>(samples);
  const double mean = s1 / n;
  const double var = std::max(0.0, s2 / n - mean * mean) * n / (n - 1.0);
  const double scale = two_pi * radius;
  return {scale * mean, scale * std::sqrt(var / n), samples, seed};
}

inline void check_samples(std::uint64_t samples) {
  if (samples < min_mc_samples)
    throw Error(ErrorCode::invalid_argument, "at least 10000 Monte Carlo samples are required");
}

}  // namespace detail

/// Monte Carlo estimate of the integral of |x - y|^{-(2+s)} over x in the
/// region and y outside it. Each sampled line contributes its 1D integral
/// over chords, which is evaluated in closed form, so the kernel's
/// singularity never enters the sampling.
inline McEstimate fractional_perimeter_mc(const Region& region, FractionalOrder s, std::uint64_t samples,
                                          std::uint64_t seed) {
  detail::check_samples(samples);
  validate(region);
  detail::PreparedRegion pr(region);
  const Vec2 c = pr.box.center();
  const double radius = 0.5 * pr.box.diagonal() * (1.0 + 1e-12);
  return detail::sample_lines(c, radius, samples, seed, [&](const Line& l) {
    thread_local std::vector<Interval> iv;
    iv.clear();
    detail::chord_intervals(pr, l, iv);
    detail::merge_intervals(iv, 0.0);
    return detail::line_functional(iv, s.s);
  });
}

/// Monte Carlo estimate of P_s of the union of the cluster's regions.
inline McEstimate fractional_union_perimeter_mc(const Cluster& c, FractionalOrder s, std::uint64_t samples,
                                                std::uint64_t seed) {
  detail::check_samples(samples);
  if (c.empty()) return {0.0, 0.0, samples, seed};
  validate(c);
  auto prep = detail::prepare(c);
  detail::RegionIndex index(prep, 0.0);
  const Box box = index.box();
  const double tol = 1e-12 * std::max(box.diagonal(), min_length);
  const double radius = 0.5 * box.diagonal() * (1.0 + 1e-12);
  const int n = index.resolution();
  return detail::sample_lines(box.center(), radius, samples, seed, [&](const Line& l) {
    thread_local std::vector<Interval> iv;
    thread_local std::vector<std::uint32_t> stamp;
    thread_local std::uint32_t epoch = 0;
    if (stamp.size() != prep.size()) {
      stamp.assign(prep.size(), 0);
      epoch = 0;
    }
    ++epoch;
    iv.clear();
    detail::traverse_grid(l, box, n, n, [&](int i, int j, double, double) {
      for (int k : index.cell(i, j)) {
        if (stamp[k] == epoch) continue;
        stamp[k] = epoch;
        detail::chord_intervals(prep[k], l, iv);
      }
    });
    detail::merge_intervals(iv, tol);
    return detail::line_functional(iv, s.s);
  });
}

/// C(s) = P_s(unit disk), estimated once per s with a fixed seed and
/// 10^7 lines, then cached.
inline McEstimate fractional_disk_constant(FractionalOrder s) {
  static std::mutex mutex;
  static std::map<double, McEstimate> cache;
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(s.s);
    if (it != cache.end()) return it->second;
  }
  McEstimate e = fractional_perimeter_mc(Disk{{0, 0}, 1.0}, s, disk_constant_samples, disk_constant_seed);
  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(s.s, e).first->second;
}

/// P_s(B_r) = C(s) r^{2-s}.
inline double fractional_perimeter_disk(double r, FractionalOrder s) {
  if (!(r > min_length)) throw Error(ErrorCode::invalid_argument, "radius must exceed the length floor");
  return fractional_disk_constant(s).value * std::pow(r, 2.0 - s.s);
}

struct FractionalClusterEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  double tail_bound = 0.0;
  double union_value = 0.0;
  double regions_value = 0.0;
};

/// 1/2 (P_s(union) + sum_k P_s(E_k)). Disks use C(s) r^{2-s}; other regions
/// and the union are sampled. `tail_areas` lists areas of ungenerated
/// regions, bounded by their disk values C(s) (a/pi)^{(2-s)/2}.
inline FractionalClusterEstimate fractional_cluster_perimeter(const Cluster& c, FractionalOrder s,
                                                             const std::vector<double>& tail_areas,
                                                             std::uint64_t samples, std::uint64_t seed) {
  FractionalClusterEstimate out;
  const McEstimate cs = fractional_disk_constant(s);
  double var = 0.0;
  double disk_sum = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (auto d = std::get_if<Disk>(&c.regions[k])) {
      disk_sum += std::pow(d->radius, 2.0 - s.s);
    } else {
      McEstimate e = fractional_perimeter_mc(c.regions[k], s, samples, stream_seed(seed, k + 1));
      out.regions_value += e.value;
      var += e.standard_error * e.standard_error;
    }
  }
  out.regions_value += cs.value * disk_sum;
  const double disk_se = cs.standard_error * disk_sum;
  McEstimate u = fractional_union_perimeter_mc(c, s, samples, seed);
  out.union_value = u.value;
  out.value = 0.5 * (out.union_value + out.regions_value);
  // The C(s) error is shared by all disk terms, so it adds linearly.
  out.standard_error = 0.5 * std::sqrt(var + u.standard_error * u.standard_error + disk_se * disk_se);
  for (double a : tail_areas) {
    if (!(a >= 0.0)) throw Error(ErrorCode::invalid_argument, "tail areas must be nonnegative");
    out.tail_bound += cs.value * std::pow(a / pi, 0.5 * (2.0 - s.s));
  }
  return out;
}

}  // namespace clusterlab
