#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <set>
#include <vector>

#include "clusterlab/cluster.hpp"
#include "clusterlab/errors.hpp"
#include "clusterlab/geometry.hpp"
#include "clusterlab/region.hpp"

namespace clusterlab {

/// Index used for the enclosing circle in parent lists.
inline constexpr int enclosing_circle = -1;
/// Parent index for a seed circle that fell below the cutoff.
inline constexpr int unlisted_circle = -2;

struct ApollonianNode {
  Disk disk;
  int depth = 0;
  std::array<int, 3> parents{};              // node indices, enclosing_circle or unlisted_circle
  std::array<double, 3> parent_curvatures{};  // signed, -1 for the enclosing circle
};

/// Seed: enclosing unit circle with two tangent inner disks of radii r and
/// 1 - r centred on the x-axis. The canonical gasket uses r = 1/2.
struct ApollonianSeed {
  double first_radius = 0.5;
};

inline constexpr double tangency_tolerance = 1e-9;

namespace detail {

using cplx = std::complex<double>;

struct Circle {
  double k;  // signed curvature
  cplx z;    // centre
  double radius() const { return 1.0 / std::abs(k); }
};

inline bool tangent(const Circle& a, const Circle& b, double tol) {
  const double d = std::abs(a.z - b.z);
  const double target = (a.k < 0.0 || b.k < 0.0) ? std::abs(a.radius() - b.radius()) : a.radius() + b.radius();
  return std::abs(d - target) <= tol;
}

inline double descartes_residual(double k1, double k2, double k3, double k4) {
  const double s = k1 + k2 + k3 + k4;
  const double q = k1 * k1 + k2 * k2 + k3 * k3 + k4 * k4;
  return std::abs(s * s - 2.0 * q) / std::max(1.0, 2.0 * q);
}

/// The circle tangent to three mutually tangent circles with the larger
/// curvature root, centre branch chosen by checking tangency.
inline Circle descartes_fourth(const Circle& a, const Circle& b, const Circle& c) {
  const double disc = a.k * b.k + b.k * c.k + c.k * a.k;
  const double k = a.k + b.k + c.k + 2.0 * std::sqrt(std::max(0.0, disc));
  const cplx lin = a.k * a.z + b.k * b.z + c.k * c.z;
  const cplx root = 2.0 * std::sqrt(a.k * b.k * a.z * b.z + b.k * c.k * b.z * c.z + c.k * a.k * c.z * a.z);
  for (cplx kz : {lin + root, lin - root}) {
    Circle d{k, kz / k};
    const double tol = tangency_tolerance * std::max(1.0, d.radius());
    if (tangent(d, a, tol) && tangent(d, b, tol) && tangent(d, c, tol)) return d;
  }
  throw std::logic_error("no tangent branch for the Descartes fourth circle");
}

struct Quad {
  std::array<int, 4> ids;  // ids[3] is the newest circle
};

}  // namespace detail

/// Every disk of the Apollonian gasket inside the unit circle with radius at
/// least `min_radius`, generated breadth-first by reflecting one circle of a
/// tangent quadruple: k' = 2(k_b + k_c + k_d) - k_a, and likewise for k z.
/// Output is sorted by (curvature, x, y); parent indices refer to that order.
inline std::vector<ApollonianNode> generate_apollonian(double min_radius, ApollonianSeed seed = {}) {
  if (!(min_radius > 0.0 && min_radius < 1.0))
    throw Error(ErrorCode::invalid_argument, "minimum radius must lie in (0, 1)");
  const double r1 = seed.first_radius;
  if (!(r1 > 0.0 && r1 < 1.0)) throw Error(ErrorCode::invalid_argument, "seed radius must lie in (0, 1)");
  using detail::Circle;
  using detail::cplx;
  std::vector<Circle> circles{{-1.0, {0.0, 0.0}}, {1.0 / r1, {r1 - 1.0, 0.0}}, {1.0 / (1.0 - r1), {r1, 0.0}}};
  std::vector<ApollonianNode> nodes;
  std::vector<int> node_of{enclosing_circle, 0, 1};  // circle id -> node id
  auto add_node = [&](int circle, int depth, std::array<int, 3> parent_circles) {
    ApollonianNode n;
    const Circle& c = circles[circle];
    n.disk = Disk{{c.z.real(), c.z.imag()}, c.radius()};
    n.depth = depth;
    for (int q = 0; q < 3; ++q) {
      n.parents[q] = node_of[parent_circles[q]];
      n.parent_curvatures[q] = circles[parent_circles[q]].k;
    }
    nodes.push_back(n);
  };
  const Circle up = detail::descartes_fourth(circles[0], circles[1], circles[2]);
  circles.push_back(up);
  circles.push_back({up.k, std::conj(up.z)});
  node_of.push_back(2);
  node_of.push_back(3);
  add_node(1, 0, {0, 2, 3});
  add_node(2, 0, {0, 1, 3});
  add_node(3, 1, {0, 1, 2});
  add_node(4, 1, {0, 1, 2});
  // Every other disk sits inside a gap bounded by one of the two first
  // generation disks, so it is no larger than them.
  std::deque<detail::Quad> queue;
  if (up.radius() >= min_radius) {
    queue.push_back({{0, 1, 2, 3}});
    queue.push_back({{0, 1, 2, 4}});
  }
  std::set<std::array<long long, 3>> seen;
  auto key = [](const Circle& c) {
    const auto q = [](double v) { return std::llround(v * 1e9); };
    return std::array<long long, 3>{q(c.k), q(c.z.real()), q(c.z.imag())};
  };
  for (std::size_t i = 0; i < circles.size(); ++i) seen.insert(key(circles[i]));
  while (!queue.empty()) {
    const detail::Quad qd = queue.front();
    queue.pop_front();
    const int depth = nodes[node_of[qd.ids[3]]].depth + 1;
    for (int replace = 0; replace < 3; ++replace) {
      std::array<int, 3> keep{};
      for (int q = 0, w = 0; q < 4; ++q)
        if (q != replace) keep[w++] = qd.ids[q];
      const Circle& a = circles[qd.ids[replace]];
      const Circle& b = circles[keep[0]];
      const Circle& c = circles[keep[1]];
      const Circle& d = circles[keep[2]];
      const double k = 2.0 * (b.k + c.k + d.k) - a.k;
      if (1.0 / k < min_radius) continue;
      const cplx kz = 2.0 * (b.k * b.z + c.k * c.z + d.k * d.z) - a.k * a.z;
      Circle child{k, kz / k};
      for (const Circle* p : {&b, &c, &d})
        if (!detail::tangent(child, *p, tangency_tolerance))
          throw std::logic_error("generated disk is not tangent to its parents");
      if (!seen.insert(key(child)).second) continue;
      const int id = static_cast<int>(circles.size());
      circles.push_back(child);
      node_of.push_back(static_cast<int>(nodes.size()));
      add_node(id, depth, keep);
      queue.push_back({{keep[0], keep[1], keep[2], id}});
    }
  }
  // Drop seed disks below the cutoff; parents that were dropped are unlisted.
  std::vector<int> kept_id(nodes.size(), unlisted_circle);
  {
    std::vector<ApollonianNode> kept;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i].disk.radius >= min_radius) {
        kept_id[i] = static_cast<int>(kept.size());
        kept.push_back(nodes[i]);
      }
    for (auto& n : kept)
      for (int& p : n.parents)
        if (p >= 0) p = kept_id[p];
    nodes = std::move(kept);
  }
  std::vector<std::size_t> order(nodes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const Disk& a = nodes[i].disk;
    const Disk& b = nodes[j].disk;
    if (a.curvature() != b.curvature()) return a.curvature() < b.curvature();
    if (a.center.x != b.center.x) return a.center.x < b.center.x;
    return a.center.y < b.center.y;
  });
  std::vector<int> rank(nodes.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = static_cast<int>(r);
  std::vector<ApollonianNode> sorted;
  sorted.reserve(nodes.size());
  for (std::size_t i : order) {
    ApollonianNode n = nodes[i];
    for (int& p : n.parents)
      if (p >= 0) p = rank[p];
    sorted.push_back(n);
  }
  return sorted;
}

inline std::vector<Disk> apollonian_disks(const std::vector<ApollonianNode>& nodes) {
  std::vector<Disk> out;
  out.reserve(nodes.size());
  for (const auto& n : nodes) out.push_back(n.disk);
  return out;
}

inline Cluster apollonian_cluster(const std::vector<ApollonianNode>& nodes) {
  Cluster c;
  c.regions.reserve(nodes.size());
  for (const auto& n : nodes) c.regions.emplace_back(n.disk);
  return c;
}

/// Worst relative Descartes residual over all (parents, self) quadruples.
inline double max_descartes_residual(const std::vector<ApollonianNode>& nodes) {
  double worst = 0.0;
  for (const auto& n : nodes) {
    const auto& p = n.parent_curvatures;
    worst = std::max(worst, detail::descartes_residual(p[0], p[1], p[2], n.disk.curvature()));
  }
  return worst;
}

/// Worst |distance - tangency distance| between a disk and its parents.
inline double max_tangency_error(const std::vector<ApollonianNode>& nodes) {
  double worst = 0.0;
  for (const auto& n : nodes) {
    for (int p : n.parents) {
      double err;
      if (p == unlisted_circle) continue;
      if (p == enclosing_circle)
        err = std::abs(norm(n.disk.center) - (1.0 - n.disk.radius));
      else
        err = std::abs(distance(n.disk.center, nodes[p].disk.center) - (n.disk.radius + nodes[p].disk.radius));
      worst = std::max(worst, err);
    }
  }
  return worst;
}

/// Fraction of the unit disk's area covered.
inline double coverage(const std::vector<Disk>& disks) {
  double a = 0.0;
  for (const auto& d : disks) a += d.radius * d.radius;
  return a;
}

/// Sum of r^alpha over disks with radius >= cutoff.
inline double radius_power_sum(const std::vector<Disk>& disks, double alpha, double cutoff = 0.0) {
  double s = 0.0;
  for (const auto& d : disks)
    if (d.radius >= cutoff) s += std::pow(d.radius, alpha);
  return s;
}

enum class SeriesVerdict { converging, indeterminate, diverging };

inline const char* to_string(SeriesVerdict v) {
  switch (v) {
    case SeriesVerdict::converging: return "converging";
    case SeriesVerdict::indeterminate: return "indeterminate";
    case SeriesVerdict::diverging: return "diverging";
  }
  return "unknown";
}

struct SeriesGrowth {
  double alpha = 0.0;
  double coarse_sum = 0.0;
  double fine_sum = 0.0;
  double factor = 0.0;
  SeriesVerdict verdict = SeriesVerdict::indeterminate;
};

inline constexpr double diverging_growth = 1.05;
inline constexpr double converging_growth = 1.005;

/// Growth of the partial sum of r^alpha between two cutoffs, classified as
/// diverging above 1.05 and converging below 1.005.
inline SeriesGrowth series_growth(const std::vector<Disk>& disks, double alpha, double coarse_cutoff,
                                  double fine_cutoff) {
  SeriesGrowth g;
  g.alpha = alpha;
  g.coarse_sum = radius_power_sum(disks, alpha, coarse_cutoff);
  g.fine_sum = radius_power_sum(disks, alpha, fine_cutoff);
  g.factor = g.fine_sum / g.coarse_sum;
  g.verdict = g.factor > diverging_growth     ? SeriesVerdict::diverging
              : g.factor < converging_growth ? SeriesVerdict::converging
                                             : SeriesVerdict::indeterminate;
  return g;
}

struct ExponentProbe {
  double alpha;
  double coarse_sum;
  double fine_sum;
};

struct ExponentEstimate {
  double alpha_hat = 0.0;
  double cutoff = 0.0;
  double alpha_lo = 0.0;
  double alpha_hi = 0.0;
  std::vector<ExponentProbe> probes;
};

/// Band ratio R(alpha): the r^alpha mass of radii in [fine, coarse) over
/// that of the band of equal log-width just above, [coarse, coarse^2/fine).
inline double band_ratio(const std::vector<Disk>& disks, double alpha, double coarse_cutoff, double fine_cutoff) {
  const double upper = coarse_cutoff * coarse_cutoff / fine_cutoff;
  double lo = 0.0, hi = 0.0;
  for (const auto& d : disks) {
    if (d.radius >= fine_cutoff && d.radius < coarse_cutoff)
      lo += std::pow(d.radius, alpha);
    else if (d.radius >= coarse_cutoff && d.radius < upper)
      hi += std::pow(d.radius, alpha);
  }
  return lo / hi;
}

inline constexpr double band_ratio_margin = 1.05;

/// Packing exponent from the self-similar growth of the partial sums. If the
/// number of disks with radius >= r grows like r^{-d}, each log-band of radii
/// adds about the same r^d mass, so R(alpha) crosses 1 at alpha = d.
/// R is strictly decreasing in alpha; the root is found by bisection. The
/// bracket spans the exponents where R passes 1.05 and 1/1.05, the
/// diverging and converging bands.
inline ExponentEstimate estimate_packing_exponent(const std::vector<Disk>& disks, double tolerance,
                                                  double coarse_cutoff, double fine_cutoff) {
  if (!(tolerance > 0.0)) throw Error(ErrorCode::invalid_argument, "tolerance must be positive");
  if (!(fine_cutoff > 0.0) || coarse_cutoff / fine_cutoff < 10.0)
    throw Error(ErrorCode::insufficient_depth, "cutoffs must be at least a decade apart");
  const double upper = coarse_cutoff * coarse_cutoff / fine_cutoff;
  std::size_t n_lo = 0, n_hi = 0;
  for (const auto& d : disks) {
    n_lo += d.radius >= fine_cutoff && d.radius < coarse_cutoff;
    n_hi += d.radius >= coarse_cutoff && d.radius < upper;
  }
  if (n_lo < 8 || n_hi < 8) throw Error(ErrorCode::insufficient_depth, "too few disks in the radius bands");
  auto solve = [&](double target) {
    double a = 0.0, b = 4.0;
    if (!(band_ratio(disks, a, coarse_cutoff, fine_cutoff) > target) ||
        !(band_ratio(disks, b, coarse_cutoff, fine_cutoff) < target))
      throw Error(ErrorCode::insufficient_depth, "band ratio does not cross the target in [0, 4]");
    for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
      const double m = 0.5 * (a + b);
      (band_ratio(disks, m, coarse_cutoff, fine_cutoff) > target ? a : b) = m;
    }
    return 0.5 * (a + b);
  };
  ExponentEstimate e;
  e.cutoff = fine_cutoff;
  e.alpha_hat = solve(1.0);
  e.alpha_lo = solve(band_ratio_margin);
  e.alpha_hi = solve(1.0 / band_ratio_margin);
  if (!(e.alpha_lo < e.alpha_hat && e.alpha_hat < e.alpha_hi) || e.alpha_hi - e.alpha_lo > tolerance)
    throw Error(ErrorCode::insufficient_depth,
                "bracket width " + std::to_string(e.alpha_hi - e.alpha_lo) + " exceeds tolerance");
  for (double a : {1.0, e.alpha_lo, e.alpha_hat, e.alpha_hi, 1.5, 2.0})
    e.probes.push_back({a, radius_power_sum(disks, a, coarse_cutoff), radius_power_sum(disks, a, fine_cutoff)});
  return e;
}

}  // namespace clusterlab
