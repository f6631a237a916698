#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "clusterlab/errors.hpp"
#include "clusterlab/geometry.hpp"
#include "clusterlab/marching_squares.hpp"

namespace clusterlab {

/// Smallest accepted length scale; anything thinner has empty interior.
inline constexpr double min_length = 1e-12;
/// Relative tolerance for loop closure and arc-endpoint consistency.
inline constexpr double closure_tolerance = 1e-12;

struct Disk {
  Vec2 center;
  double radius = 1.0;
  int orientation = 1;  // -1 for an enclosing circle (negative curvature)

  double curvature() const { return orientation / radius; }
};

struct AxisRect {
  Vec2 min;
  Vec2 max;
};

/// Piecewise arc/segment boundary. Outer loops run counterclockwise and holes
/// clockwise, so the region is always on the left.
struct ArcPolygon {
  std::vector<std::vector<Edge>> loops;
};

/// Cells of side h; cell (i, j) covers origin + h*[i, i+1] x h*[j, j+1].
struct PixelMask {
  Vec2 origin;
  double h = 1.0;
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> cells;  // row-major, row j = y index, values 0/1

  bool at(int i, int j) const {
    if (i < 0 || j < 0 || i >= width || j >= height) return false;
    return cells[static_cast<std::size_t>(j) * width + i] != 0;
  }
  LabelView view() const { return {cells, width, height}; }
  long count() const {
    long n = 0;
    for (auto c : cells) n += c != 0;
    return n;
  }
};

using Region = std::variant<Disk, AxisRect, ArcPolygon, PixelMask>;

inline const char* region_kind(const Region& r) {
  switch (r.index()) {
    case 0: return "disk";
    case 1: return "rect";
    case 2: return "arcpoly";
    default: return "pixels";
  }
}

inline bool is_exact(const Region& r) { return !std::holds_alternative<PixelMask>(r); }

namespace detail {

inline bool finite(Vec2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

inline double arcpoly_scale(const ArcPolygon& p) {
  Box b;
  for (const auto& loop : p.loops) b.expand(loop_bounds(loop));
  return std::max(b.diagonal(), min_length);
}

inline void validate_arcpoly(const ArcPolygon& p) {
  if (p.loops.empty()) throw Error(ErrorCode::invalid_region, "arc polygon has no loops");
  const double scale = arcpoly_scale(p);
  const double tol = closure_tolerance * scale;
  double area = 0.0;
  for (std::size_t l = 0; l < p.loops.size(); ++l) {
    const auto& loop = p.loops[l];
    if (loop.empty()) throw Error(ErrorCode::invalid_region, "empty loop " + std::to_string(l));
    for (std::size_t k = 0; k < loop.size(); ++k) {
      const Edge& e = loop[k];
      if (!finite(e.from) || !finite(e.to) || (e.is_arc() && (!finite(e.center) || !std::isfinite(e.sweep))))
        throw Error(ErrorCode::invalid_region, "non-finite edge coordinates");
      if (e.length() <= min_length * scale)
        throw Error(ErrorCode::invalid_region, "degenerate edge in loop " + std::to_string(l));
      if (e.is_arc()) {
        if (std::abs(e.sweep) > two_pi + 1e-12)
          throw Error(ErrorCode::invalid_region, "arc sweep exceeds a full turn");
        const double r = e.radius();
        Vec2 expected = e.is_full_circle() ? e.from : e.center + r * unit_at(e.start_angle() + e.sweep);
        if (distance(expected, e.to) > tol + closure_tolerance * r)
          throw Error(ErrorCode::invalid_region, "arc endpoint inconsistent with centre and sweep");
      }
      const Edge& next = loop[(k + 1) % loop.size()];
      if (distance(e.to, next.from) > tol)
        throw Error(ErrorCode::invalid_region, "loop " + std::to_string(l) + " is not closed");
    }
    area += loop_signed_area(loop);
  }
  if (!(area > 0.0)) throw Error(ErrorCode::invalid_region, "arc polygon has non-positive signed area");
}

}  // namespace detail

inline void validate(const Region& region) {
  std::visit(
      [](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Disk>) {
          if (!detail::finite(r.center) || !std::isfinite(r.radius) || !(r.radius > min_length))
            throw Error(ErrorCode::invalid_region, "disk radius must exceed the length floor");
          if (r.orientation != 1 && r.orientation != -1)
            throw Error(ErrorCode::invalid_region, "disk orientation must be +1 or -1");
        } else if constexpr (std::is_same_v<T, AxisRect>) {
          if (!detail::finite(r.min) || !detail::finite(r.max) || !(r.max.x - r.min.x > min_length) ||
              !(r.max.y - r.min.y > min_length))
            throw Error(ErrorCode::invalid_region, "rectangle must have positive extent");
        } else if constexpr (std::is_same_v<T, ArcPolygon>) {
          detail::validate_arcpoly(r);
        } else {
          if (r.width <= 0 || r.height <= 0 || !(r.h > min_length) || !detail::finite(r.origin))
            throw Error(ErrorCode::invalid_region, "pixel mask needs positive size and cell width");
          if (r.cells.size() != static_cast<std::size_t>(r.width) * r.height)
            throw Error(ErrorCode::invalid_region, "pixel mask cell count mismatch");
          if (r.count() == 0) throw Error(ErrorCode::invalid_region, "pixel mask is empty");
        }
      },
      region);
}

inline double area(const Region& region) {
  validate(region);
  return std::visit(
      [](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Disk>) {
          return pi * r.radius * r.radius;
        } else if constexpr (std::is_same_v<T, AxisRect>) {
          return (r.max.x - r.min.x) * (r.max.y - r.min.y);
        } else if constexpr (std::is_same_v<T, ArcPolygon>) {
          double a = 0.0;
          for (const auto& loop : r.loops) a += loop_signed_area(loop);
          return a;
        } else {
          return static_cast<double>(r.count()) * r.h * r.h;
        }
      },
      region);
}

inline double region_perimeter(const Region& region) {
  validate(region);
  return std::visit(
      [](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Disk>) {
          return two_pi * r.radius;
        } else if constexpr (std::is_same_v<T, AxisRect>) {
          return 2.0 * ((r.max.x - r.min.x) + (r.max.y - r.min.y));
        } else if constexpr (std::is_same_v<T, ArcPolygon>) {
          double len = 0.0;
          for (const auto& loop : r.loops)
            for (const Edge& e : loop) len += e.length();
          return len;
        } else {
          return label_field_perimeter(r.view(), r.h);
        }
      },
      region);
}

/// Boundary of an exact region as counterclockwise edge loops.
inline std::vector<std::vector<Edge>> boundary_loops(const Region& region) {
  return std::visit(
      [](const auto& r) -> std::vector<std::vector<Edge>> {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Disk>) {
          return {{Edge::circle(r.center, r.radius)}};
        } else if constexpr (std::is_same_v<T, AxisRect>) {
          Vec2 a = r.min, b{r.max.x, r.min.y}, c = r.max, d{r.min.x, r.max.y};
          return {{Edge::segment(a, b), Edge::segment(b, c), Edge::segment(c, d), Edge::segment(d, a)}};
        } else if constexpr (std::is_same_v<T, ArcPolygon>) {
          return r.loops;
        } else {
          throw Error(ErrorCode::unsupported_representation,
                      "pixel masks have no exact boundary; polygonize first");
        }
      },
      region);
}

inline Box bounds(const Region& region) {
  return std::visit(
      [](const auto& r) -> Box {
        using T = std::decay_t<decltype(r)>;
        Box b;
        if constexpr (std::is_same_v<T, Disk>) {
          b.expand(r.center - Vec2{r.radius, r.radius});
          b.expand(r.center + Vec2{r.radius, r.radius});
        } else if constexpr (std::is_same_v<T, AxisRect>) {
          b.expand(r.min);
          b.expand(r.max);
        } else if constexpr (std::is_same_v<T, ArcPolygon>) {
          for (const auto& loop : r.loops) b.expand(loop_bounds(loop));
        } else {
          b.expand(r.origin);
          b.expand(r.origin + Vec2{r.width * r.h, r.height * r.h});
        }
        return b;
      },
      region);
}

/// Open-set membership (points on the boundary may go either way).
inline bool contains(const Region& region, Vec2 p) {
  return std::visit(
      [p](const auto& r) -> bool {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Disk>) {
          return distance(p, r.center) < r.radius;
        } else if constexpr (std::is_same_v<T, AxisRect>) {
          return p.x > r.min.x && p.x < r.max.x && p.y > r.min.y && p.y < r.max.y;
        } else if constexpr (std::is_same_v<T, ArcPolygon>) {
          double w = 0.0;
          for (const auto& loop : r.loops) {
            // A loop cannot wind around points outside its bounding box.
            if (!loop_bounds(loop).contains(p)) continue;
            w += loop_winding(loop, p);
          }
          return std::lround(w) != 0;
        } else {
          const double fx = (p.x - r.origin.x) / r.h;
          const double fy = (p.y - r.origin.y) / r.h;
          return r.at(static_cast<int>(std::floor(fx)), static_cast<int>(std::floor(fy)));
        }
      },
      region);
}

}  // namespace clusterlab
