#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "clusterlab/errors.hpp"
#include "clusterlab/geometry.hpp"
#include "clusterlab/region.hpp"

namespace clusterlab {

/// Ordered regions E_1..E_N; the external region E_0 is the complement of
/// their union and is never materialised.
struct Cluster {
  std::vector<Region> regions;

  std::size_t size() const { return regions.size(); }
  bool empty() const { return regions.empty(); }
};

/// Pairwise overlaps above this fraction of the smaller area reject a cluster.
inline constexpr double disjointness_tolerance = 1e-10;

namespace detail {

/// Winding numbers of a set of closed loops by counting signed crossings of
/// the upward vertical ray. Edges are cut into x-monotone pieces, bucketed
/// by x; a half-open rule on x makes shared vertices count once.
class CrossingIndex {
 public:
  CrossingIndex() = default;

  explicit CrossingIndex(const std::vector<std::vector<Edge>>& loops) {
    for (const auto& loop : loops)
      for (const Edge& e : loop) add_edge(e);
    if (pieces_.empty()) return;
    xmin_ = std::numeric_limits<double>::infinity();
    double xmax = -xmin_;
    for (const auto& p : pieces_) {
      xmin_ = std::min({xmin_, p.x0, p.x1});
      xmax = std::max({xmax, p.x0, p.x1});
    }
    nb_ = std::clamp(static_cast<int>(pieces_.size() / 2), 1, 8192);
    width_ = (xmax - xmin_) / nb_;
    if (!(width_ > 0.0)) nb_ = 1;
    buckets_.resize(nb_);
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
      const auto& p = pieces_[k];
      const int b0 = bucket(std::min(p.x0, p.x1)), b1 = bucket(std::max(p.x0, p.x1));
      for (int b = b0; b <= b1; ++b) buckets_[b].push_back(static_cast<int>(k));
    }
  }

  int winding(Vec2 q) const {
    if (pieces_.empty()) return 0;
    int w = 0;
    for (int k : buckets_[bucket(q.x)]) {
      const Piece& p = pieces_[k];
      const bool rightward = p.x0 <= q.x && q.x < p.x1;
      const bool leftward = p.x1 <= q.x && q.x < p.x0;
      if (!rightward && !leftward) continue;
      if (!(p.y_at(q.x) > q.y)) continue;
      w += leftward ? 1 : -1;
    }
    return w;
  }

 private:
  struct Piece {
    double x0, x1;  // x at start and end, in travel order
    bool arc;
    Vec2 a, b;       // segment endpoints
    Vec2 c;          // arc centre
    double r;
    bool upper;      // arc lies above its centre

    double y_at(double x) const {
      if (!arc) return a.y + (x - a.x) * (b.y - a.y) / (b.x - a.x);
      const double dx = x - c.x;
      const double h = std::sqrt(std::max(0.0, r * r - dx * dx));
      return upper ? c.y + h : c.y - h;
    }
  };

  int bucket(double x) const {
    if (nb_ == 1) return 0;
    return std::clamp(static_cast<int>((x - xmin_) / width_), 0, nb_ - 1);
  }

  void add_edge(const Edge& e) {
    if (!e.is_arc()) {
      if (e.from.x != e.to.x) pieces_.push_back({e.from.x, e.to.x, false, e.from, e.to, {}, 0.0, false});
      return;
    }
    const double r = e.radius();
    const double a0 = e.start_angle();
    // Cut at the leftmost and rightmost points (angles k*pi).
    std::vector<double> cuts{0.0};
    const double lo = std::min(a0, a0 + e.sweep), hi = std::max(a0, a0 + e.sweep);
    for (double k = std::ceil(lo / pi); k * pi < hi; k += 1.0)
      if (k * pi > lo) cuts.push_back((k * pi - a0) / e.sweep);
    cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double t0 = cuts[i], t1 = cuts[i + 1];
      if (!(t1 > t0)) continue;
      auto x_at = [&](double t) {
        if (t == 0.0) return e.from.x;
        if (t == 1.0) return e.to.x;
        return e.center.x + r * std::cos(a0 + t * e.sweep);
      };
      const bool upper = std::sin(a0 + 0.5 * (t0 + t1) * e.sweep) > 0.0;
      const double x0 = x_at(t0), x1 = x_at(t1);
      if (x0 != x1) pieces_.push_back({x0, x1, true, {}, {}, e.center, r, upper});
    }
  }

  std::vector<Piece> pieces_;
  std::vector<std::vector<int>> buckets_;
  double xmin_ = 0.0;
  double width_ = 0.0;
  int nb_ = 1;
};

/// Exact region with cached loops, loop bounds and crossing index, for
/// repeated queries.
struct PreparedRegion {
  const Region* region = nullptr;
  Box box;
  std::vector<std::vector<Edge>> loops;
  std::vector<Box> loop_boxes;
  CrossingIndex crossings;

  explicit PreparedRegion(const Region& r) : region(&r), box(bounds(r)) {
    if (is_exact(r)) {
      loops = boundary_loops(r);
      loop_boxes.reserve(loops.size());
      for (const auto& l : loops) loop_boxes.push_back(loop_bounds(l));
      if (std::holds_alternative<ArcPolygon>(r)) crossings = CrossingIndex(loops);
    }
  }

  bool contains(Vec2 p) const {
    if (!box.contains(p)) return false;
    if (!std::holds_alternative<ArcPolygon>(*region)) return clusterlab::contains(*region, p);
    return crossings.winding(p) != 0;
  }
};

inline std::vector<PreparedRegion> prepare(const Cluster& c) {
  std::vector<PreparedRegion> out;
  out.reserve(c.size());
  for (const auto& r : c.regions) out.emplace_back(r);
  return out;
}

inline Box cluster_bounds(const std::vector<PreparedRegion>& prep) {
  Box b;
  for (const auto& p : prep) b.expand(p.box);
  return b;
}

/// Uniform grid over region bounding boxes.
class RegionIndex {
 public:
  RegionIndex(const std::vector<PreparedRegion>& prep, double pad) : prep_(&prep) {
    box_ = cluster_bounds(prep);
    box_.xmin -= pad;
    box_.ymin -= pad;
    box_.xmax += pad;
    box_.ymax += pad;
    n_ = std::clamp(static_cast<int>(2.0 * std::sqrt(static_cast<double>(prep.size()))), 1, 512);
    cells_.resize(static_cast<std::size_t>(n_) * n_);
    for (std::size_t k = 0; k < prep.size(); ++k) {
      const Box& b = prep[k].box;
      const int i0 = cell_x(b.xmin - pad), i1 = cell_x(b.xmax + pad);
      const int j0 = cell_y(b.ymin - pad), j1 = cell_y(b.ymax + pad);
      for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i) cells_[static_cast<std::size_t>(j) * n_ + i].push_back(static_cast<int>(k));
    }
  }

  /// Index of the first region other than `skip` containing p, or -1.
  int find_containing(Vec2 p, int skip = -1) const {
    if (!box_.contains(p)) return -1;
    for (int k : cells_[static_cast<std::size_t>(cell_y(p.y)) * n_ + cell_x(p.x)])
      if (k != skip && (*prep_)[k].contains(p)) return k;
    return -1;
  }

  const Box& box() const { return box_; }
  int resolution() const { return n_; }
  const std::vector<int>& cell(int i, int j) const { return cells_[static_cast<std::size_t>(j) * n_ + i]; }
  int cell_x(double x) const {
    const double w = box_.width();
    if (!(w > 0.0)) return 0;
    return std::clamp(static_cast<int>((x - box_.xmin) / w * n_), 0, n_ - 1);
  }
  int cell_y(double y) const {
    const double h = box_.height();
    if (!(h > 0.0)) return 0;
    return std::clamp(static_cast<int>((y - box_.ymin) / h * n_), 0, n_ - 1);
  }

 private:
  const std::vector<PreparedRegion>* prep_;
  Box box_;
  int n_ = 1;
  std::vector<std::vector<int>> cells_;
};

struct OwnedEdge {
  Edge edge;
  int owner;
  Box box;
};

inline std::vector<OwnedEdge> collect_edges(const std::vector<PreparedRegion>& prep) {
  std::vector<OwnedEdge> edges;
  for (std::size_t k = 0; k < prep.size(); ++k)
    for (const auto& loop : prep[k].loops)
      for (const Edge& e : loop) edges.push_back({e, static_cast<int>(k), e.bounds()});
  return edges;
}

/// Calls fn(a, b) for every pair of edges from different owners whose
/// bounding boxes overlap (padded by tol). Sweep over sorted x-intervals.
template <class Fn>
void for_each_edge_pair(const std::vector<OwnedEdge>& edges, double tol, Fn&& fn) {
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return edges[a].box.xmin < edges[b].box.xmin; });
  for (std::size_t i = 0; i < order.size(); ++i) {
    const OwnedEdge& a = edges[order[i]];
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const OwnedEdge& b = edges[order[j]];
      if (b.box.xmin > a.box.xmax + tol) break;
      if (a.owner == b.owner || !a.box.overlaps(b.box, tol)) continue;
      fn(order[i], order[j]);
    }
  }
}

/// Parameters where each edge must be split so that every piece touches
/// at most one other region along its interior.
inline std::vector<std::vector<double>> split_parameters(const std::vector<OwnedEdge>& edges, double tol) {
  std::vector<std::vector<double>> cuts(edges.size());
  auto add = [&](std::size_t i, const Edge& other) {
    const Edge& e = edges[i].edge;
    for (double t : intersection_params(e, other, tol)) cuts[i].push_back(t);
    if (auto t = e.param_of(other.from, tol)) cuts[i].push_back(*t);
    if (auto t = e.param_of(other.to, tol)) cuts[i].push_back(*t);
  };
  for_each_edge_pair(edges, tol, [&](std::size_t a, std::size_t b) {
    add(a, edges[b].edge);
    add(b, edges[a].edge);
  });
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto& c = cuts[i];
    const double len = edges[i].edge.length();
    const double eps = tol / len;
    std::vector<double> clean{0.0};
    std::sort(c.begin(), c.end());
    for (double t : c) {
      if (t <= eps || t >= 1.0 - eps) continue;
      if ((t - clean.back()) * len <= tol) continue;
      clean.push_back(t);
    }
    clean.push_back(1.0);
    c = std::move(clean);
  }
  return cuts;
}

struct BoundaryPiece {
  Edge edge;
  int owner;     // 0-based region index
  int neighbor;  // 0-based region index across the piece, or -1 for exterior
};

inline double probe_distance(const Edge& piece, double scale) {
  double d = 1e-9 * scale;
  d = std::min(d, 0.25 * piece.length());
  if (piece.is_arc()) d = std::min(d, 1e-3 * piece.radius());
  return d;
}

/// Splits every region boundary into pieces and labels the region on the
/// far side of each piece by probing just outside its midpoint.
inline std::vector<BoundaryPiece> classify_boundary(const std::vector<PreparedRegion>& prep) {
  const double scale = std::max(cluster_bounds(prep).diagonal(), min_length);
  const double tol = 1e-10 * scale;
  auto edges = collect_edges(prep);
  auto cuts = split_parameters(edges, tol);
  RegionIndex index(prep, 1e-6 * scale);
  std::vector<BoundaryPiece> pieces;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& c = cuts[i];
    for (std::size_t k = 0; k + 1 < c.size(); ++k) {
      Edge piece = c.size() == 2 ? edges[i].edge : edges[i].edge.sub(c[k], c[k + 1]);
      const double tm = c.size() == 2 ? 0.5 : 0.5 * (c[k] + c[k + 1]);
      const Vec2 m = edges[i].edge.point_at(tm);
      const Vec2 n = edges[i].edge.normal_at(tm);
      const Vec2 q = m + probe_distance(piece, scale) * n;
      pieces.push_back({piece, edges[i].owner, index.find_containing(q, edges[i].owner)});
    }
  }
  return pieces;
}

/// a - sin(a) cos(a): twice the area of a unit circular segment of half-angle a.
inline double segment_shape(double a) {
  if (a < 1e-2) {
    const double x = 2.0 * a, x3 = x * x * x;
    return x3 / 12.0 - x3 * x * x / 240.0 + x3 * x3 * x / 10080.0;
  }
  return a - 0.5 * std::sin(2.0 * a);
}

/// Area of the intersection of two disks; stable near tangency, where the
/// textbook acos form cancels catastrophically.
inline double lens_area(double r1, double r2, double d) {
  const double overlap = (r1 + r2) - d;
  if (overlap <= 0.0) return 0.0;
  const double rmin = std::min(r1, r2);
  if (d <= std::abs(r1 - r2)) return pi * rmin * rmin;
  const double h = 0.5 / d * std::sqrt(std::max(0.0, overlap * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2)));
  const double x1 = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
  const double x2 = d - x1;
  return r1 * r1 * segment_shape(std::atan2(h, x1)) + r2 * r2 * segment_shape(std::atan2(h, x2));
}

/// Area of the intersection of two exact regions via Green's theorem over
/// the boundary pieces of each that lie inside the other.
inline double exact_overlap_area(const PreparedRegion& a, const PreparedRegion& b) {
  const Region& ra = *a.region;
  const Region& rb = *b.region;
  if (auto da = std::get_if<Disk>(&ra))
    if (auto db = std::get_if<Disk>(&rb)) return lens_area(da->radius, db->radius, distance(da->center, db->center));
  if (auto xa = std::get_if<AxisRect>(&ra))
    if (auto xb = std::get_if<AxisRect>(&rb)) {
      const double w = std::min(xa->max.x, xb->max.x) - std::max(xa->min.x, xb->min.x);
      const double h = std::min(xa->max.y, xb->max.y) - std::max(xa->min.y, xb->min.y);
      return w > 0.0 && h > 0.0 ? w * h : 0.0;
    }
  Box joint = a.box;
  joint.expand(b.box);
  const double scale = std::max(joint.diagonal(), min_length);
  const double tol = 1e-10 * scale;
  std::vector<OwnedEdge> edges;
  for (const auto& loop : a.loops)
    for (const Edge& e : loop) edges.push_back({e, 0, e.bounds()});
  for (const auto& loop : b.loops)
    for (const Edge& e : loop) edges.push_back({e, 1, e.bounds()});
  auto cuts = split_parameters(edges, tol);
  double total = 0.0;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const PreparedRegion& other = edges[i].owner == 0 ? b : a;
    const auto& c = cuts[i];
    for (std::size_t k = 0; k + 1 < c.size(); ++k) {
      Edge piece = edges[i].edge.sub(c[k], c[k + 1]);
      const double tm = 0.5 * (c[k] + c[k + 1]);
      const Vec2 m = edges[i].edge.point_at(tm);
      const Vec2 n = edges[i].edge.normal_at(tm);
      const double d = probe_distance(piece, scale);
      const bool out_in = other.contains(m + d * n);
      const bool in_in = other.contains(m - d * n);
      if ((out_in && in_in) || (edges[i].owner == 0 && in_in && !out_in)) total += piece.green_term();
    }
  }
  return std::max(0.0, total);
}

inline double pixel_overlap_area(const PixelMask& mask, const PreparedRegion& other) {
  long n = 0;
  for (int j = 0; j < mask.height; ++j)
    for (int i = 0; i < mask.width; ++i)
      if (mask.at(i, j) && other.contains(mask.origin + mask.h * Vec2{i + 0.5, j + 0.5})) ++n;
  return static_cast<double>(n) * mask.h * mask.h;
}

inline double overlap_area(const PreparedRegion& a, const PreparedRegion& b) {
  if (!a.box.overlaps(b.box)) return 0.0;
  if (auto pa = std::get_if<PixelMask>(a.region)) return pixel_overlap_area(*pa, b);
  if (auto pb = std::get_if<PixelMask>(b.region)) return pixel_overlap_area(*pb, a);
  return exact_overlap_area(a, b);
}

inline bool same_grid(const PixelMask& a, const PixelMask& b) {
  return a.origin == b.origin && a.h == b.h && a.width == b.width && a.height == b.height;
}

}  // namespace detail

/// Checks region validity and essential disjointness; throws on failure.
inline void validate(const Cluster& c) {
  std::vector<double> areas;
  areas.reserve(c.size());
  for (const auto& r : c.regions) {
    validate(r);
    areas.push_back(area(r));
  }
  auto prep = detail::prepare(c);
  std::vector<std::size_t> order(prep.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return prep[a].box.xmin < prep[b].box.xmin; });
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const auto& a = prep[order[i]];
      const auto& b = prep[order[j]];
      if (b.box.xmin > a.box.xmax) break;
      if (!a.box.overlaps(b.box)) continue;
      const double ov = detail::overlap_area(a, b);
      const double limit = disjointness_tolerance * std::min(areas[order[i]], areas[order[j]]);
      if (ov > limit)
        throw Error(ErrorCode::invalid_cluster, "regions " + std::to_string(std::min(order[i], order[j]) + 1) +
                                                    " and " + std::to_string(std::max(order[i], order[j]) + 1) +
                                                    " overlap");
    }
  }
}

inline std::vector<double> measures(const Cluster& c) {
  std::vector<double> m;
  m.reserve(c.size());
  for (const auto& r : c.regions) m.push_back(area(r));
  return m;
}

/// Perimeter of the union of the regions, i.e. P(E_0).
inline double union_perimeter(const Cluster& c) {
  if (c.empty()) return 0.0;
  bool any_pixel = false, all_pixel = true;
  for (const auto& r : c.regions) {
    any_pixel = any_pixel || !is_exact(r);
    all_pixel = all_pixel && !is_exact(r);
  }
  if (any_pixel) {
    if (!all_pixel) throw Error(ErrorCode::unsupported_representation, "cannot mix pixel masks and exact regions");
    PixelMask u = std::get<PixelMask>(c.regions.front());
    for (const auto& r : c.regions) {
      const auto& m = std::get<PixelMask>(r);
      if (!detail::same_grid(u, m))
        throw Error(ErrorCode::unsupported_representation, "pixel regions must share one grid");
      for (std::size_t k = 0; k < u.cells.size(); ++k) u.cells[k] = u.cells[k] || m.cells[k];
    }
    return label_field_perimeter(u.view(), u.h);
  }
  auto prep = detail::prepare(c);
  double ext = 0.0;
  for (const auto& p : detail::classify_boundary(prep))
    if (p.neighbor < 0) ext += p.edge.length();
  return ext;
}

/// P(E) = 1/2 (P(E_0) + sum_k P(E_k)).
inline double cluster_perimeter(const Cluster& c) {
  validate(c);
  double sum = 0.0;
  for (const auto& r : c.regions) sum += region_perimeter(r);
  return 0.5 * (union_perimeter(c) + sum);
}

/// Keeps regions 1..n.
inline Cluster truncate(const Cluster& c, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "truncation length must be at least 1");
  Cluster out;
  out.regions.assign(c.regions.begin(), c.regions.begin() + static_cast<std::ptrdiff_t>(std::min(n, c.size())));
  return out;
}

}  // namespace clusterlab
