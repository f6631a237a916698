#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "clusterlab/cluster.hpp"
#include "clusterlab/errors.hpp"
#include "clusterlab/geometry.hpp"
#include "clusterlab/region.hpp"

namespace clusterlab {

/// Which open middle interval to remove from each surviving interval at
/// stage n. `absolute`: length base^n (times |S| = 1), the same for every
/// interval of the stage. `relative`: the fraction `base` of the interval.
struct CantorSchedule {
  enum class Kind { absolute, relative };
  Kind kind = Kind::absolute;
  double base = 0.25;

  double removed(int stage, double interval_length) const {
    return kind == Kind::absolute ? std::pow(base, stage) : base * interval_length;
  }
};

struct CantorCluster {
  Cluster cluster;              // E1 upper half, E2 lower half, E3 disks on removed intervals
  double perimeter = 0.0;       // cluster perimeter
  double region3_perimeter = 0.0;
  double boundary_length = 0.0;  // P(E3) plus the surviving part of S
  double surviving_measure = 0.0;
  double gap = 0.0;              // boundary_length - P(E3)
};

namespace detail {

struct Span {
  double lo, hi;
};

/// Surviving intervals after `depth` stages, plus the removed ones.
inline void cantor_stages(int depth, const CantorSchedule& schedule, std::vector<Span>& kept,
                          std::vector<Span>& removed) {
  kept = {{0.0, 1.0}};
  removed.clear();
  for (int n = 1; n <= depth; ++n) {
    std::vector<Span> next;
    next.reserve(2 * kept.size());
    for (const Span& s : kept) {
      const double len = s.hi - s.lo;
      const double gap = schedule.removed(n, len);
      if (!(gap > 0.0) || !(gap < len))
        throw Error(ErrorCode::not_fat, "stage " + std::to_string(n) + " removes a whole interval");
      const double mid = 0.5 * (s.lo + s.hi);
      const Span r{mid - 0.5 * gap, mid + 0.5 * gap};
      next.push_back({s.lo, r.lo});
      next.push_back({r.hi, s.hi});
      removed.push_back(r);
    }
    kept = std::move(next);
  }
}

}  // namespace detail

/// Rejects schedules whose limit set has measure zero, by simulating 200
/// stages on interval lengths (all intervals of a stage share one length
/// for both schedule kinds).
inline void check_fat(const CantorSchedule& schedule) {
  double len = 1.0, count = 1.0;
  for (int n = 1; n <= 200; ++n) {
    const double gap = schedule.removed(n, len);
    if (!(gap > 0.0) || !(gap < len))
      throw Error(ErrorCode::not_fat, "stage " + std::to_string(n) + " removes a whole interval");
    len = 0.5 * (len - gap);
    count *= 2.0;
    if (count * len <= 1e-9) throw Error(ErrorCode::not_fat, "the Cantor set has zero measure");
  }
}

/// Rectangle R = [0,1] x [-1/2, 1/2] split by S = [0,1] x {0}; E3 is the
/// union of disks whose diameters are the intervals removed from S, E1 and
/// E2 are the parts of R above and below S outside E3.
inline CantorCluster build_cantor_cluster(int depth, CantorSchedule schedule = {}) {
  if (depth < 1) throw Error(ErrorCode::invalid_argument, "depth must be at least 1");
  check_fat(schedule);
  std::vector<detail::Span> kept, removed;
  detail::cantor_stages(depth, schedule, kept, removed);
  std::sort(removed.begin(), removed.end(), [](const detail::Span& a, const detail::Span& b) { return a.lo < b.lo; });

  auto centre = [](const detail::Span& r) { return Vec2{0.5 * (r.lo + r.hi), 0.0}; };
  auto arc = [](Vec2 from, Vec2 to, Vec2 c, double sweep) { return Edge{Edge::Kind::arc, from, to, c, sweep}; };

  // E1: along S left to right, bulging over each disk, then up and around.
  std::vector<Edge> upper;
  double x = 0.0;
  for (const auto& r : removed) {
    upper.push_back(Edge::segment({x, 0}, {r.lo, 0}));
    upper.push_back(arc({r.lo, 0}, {r.hi, 0}, centre(r), -pi));
    x = r.hi;
  }
  upper.push_back(Edge::segment({x, 0}, {1, 0}));
  upper.push_back(Edge::segment({1, 0}, {1, 0.5}));
  upper.push_back(Edge::segment({1, 0.5}, {0, 0.5}));
  upper.push_back(Edge::segment({0, 0.5}, {0, 0}));

  // E2: mirror image, travelling right to left along S.
  std::vector<Edge> lower;
  x = 1.0;
  for (auto it = removed.rbegin(); it != removed.rend(); ++it) {
    lower.push_back(Edge::segment({x, 0}, {it->hi, 0}));
    lower.push_back(arc({it->hi, 0}, {it->lo, 0}, centre(*it), -pi));
    x = it->lo;
  }
  lower.push_back(Edge::segment({x, 0}, {0, 0}));
  lower.push_back(Edge::segment({0, 0}, {0, -0.5}));
  lower.push_back(Edge::segment({0, -0.5}, {1, -0.5}));
  lower.push_back(Edge::segment({1, -0.5}, {1, 0}));

  ArcPolygon disks;
  for (const auto& r : removed) {
    disks.loops.push_back({arc({r.hi, 0}, {r.lo, 0}, centre(r), pi), arc({r.lo, 0}, {r.hi, 0}, centre(r), pi)});
  }

  CantorCluster out;
  out.cluster.regions = {ArcPolygon{{upper}}, ArcPolygon{{lower}}, disks};
  out.perimeter = cluster_perimeter(out.cluster);
  out.region3_perimeter = region_perimeter(out.cluster.regions[2]);
  for (const auto& k : kept) out.surviving_measure += k.hi - k.lo;
  out.boundary_length = out.region3_perimeter + out.surviving_measure;
  out.gap = out.boundary_length - out.region3_perimeter;
  return out;
}

}  // namespace clusterlab
