#pragma once

#include <cmath>

#include "clusterlab/cluster.hpp"
#include "clusterlab/errors.hpp"
#include "clusterlab/geometry.hpp"

namespace clusterlab {

/// Radius of the outer arcs of the equal-area standard double bubble with
/// region area a. Each region is a disk sector of angle 4pi/3 plus the
/// triangle to the chord, so a = R^2 (2pi/3 + sqrt(3)/4).
inline double double_bubble_radius(double a) {
  if (!(a > 0.0)) throw Error(ErrorCode::invalid_argument, "area must be positive");
  return std::sqrt(a / (2.0 * pi / 3.0 + std::sqrt(3.0) / 4.0));
}

/// Perimeter: two arcs of angle 4pi/3 and the flat interface of length R sqrt(3).
inline double double_bubble_perimeter(double a) {
  const double r = double_bubble_radius(a);
  return r * (8.0 * pi / 3.0 + std::sqrt(3.0));
}

/// Equal-area standard double bubble centred at `centre`: arcs of radius R
/// about centre -+ (R/2, 0), meeting the vertical interface at 120 degrees.
inline Cluster build_double_bubble(double a, Vec2 centre = {0, 0}) {
  const double r = double_bubble_radius(a);
  const double y0 = 0.5 * std::sqrt(3.0) * r;
  const Vec2 top = centre + Vec2{0, y0}, bottom = centre + Vec2{0, -y0};
  Edge left_arc = Edge::arc(centre + Vec2{-0.5 * r, 0}, r, pi / 3.0, 4.0 * pi / 3.0);
  left_arc.from = top;
  left_arc.to = bottom;
  Edge right_arc = Edge::arc(centre + Vec2{0.5 * r, 0}, r, 4.0 * pi / 3.0, 4.0 * pi / 3.0);
  right_arc.from = bottom;
  right_arc.to = top;
  ArcPolygon left{{{Edge::segment(bottom, top), left_arc}}};
  ArcPolygon right{{{Edge::segment(top, bottom), right_arc}}};
  return Cluster{{left, right}};
}

}  // namespace clusterlab
