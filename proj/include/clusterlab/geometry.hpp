#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

namespace clusterlab {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
inline double angle_of(Vec2 a) { return std::atan2(a.y, a.x); }
inline Vec2 unit_at(double angle) { return {std::cos(angle), std::sin(angle)}; }
constexpr Vec2 perp_right(Vec2 a) { return {a.y, -a.x}; }

struct Box {
  double xmin = std::numeric_limits<double>::infinity();
  double ymin = std::numeric_limits<double>::infinity();
  double xmax = -std::numeric_limits<double>::infinity();
  double ymax = -std::numeric_limits<double>::infinity();

  bool empty() const { return xmin > xmax || ymin > ymax; }
  void expand(Vec2 p) {
    xmin = std::min(xmin, p.x);
    ymin = std::min(ymin, p.y);
    xmax = std::max(xmax, p.x);
    ymax = std::max(ymax, p.y);
  }
  void expand(const Box& b) {
    xmin = std::min(xmin, b.xmin);
    ymin = std::min(ymin, b.ymin);
    xmax = std::max(xmax, b.xmax);
    ymax = std::max(ymax, b.ymax);
  }
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double diagonal() const { return empty() ? 0.0 : std::hypot(width(), height()); }
  Vec2 center() const { return {0.5 * (xmin + xmax), 0.5 * (ymin + ymax)}; }
  bool contains(Vec2 p, double pad = 0.0) const {
    return p.x >= xmin - pad && p.x <= xmax + pad && p.y >= ymin - pad && p.y <= ymax + pad;
  }
  bool overlaps(const Box& b, double pad = 0.0) const {
    return xmin <= b.xmax + pad && b.xmin <= xmax + pad && ymin <= b.ymax + pad &&
           b.ymin <= ymax + pad;
  }
};

/// Wraps an angle into [0, 2pi).
inline double wrap_positive(double a) {
  a = std::fmod(a, two_pi);
  if (a < 0.0) a += two_pi;
  if (a >= two_pi) a -= two_pi;
  return a;
}

/// A boundary edge: a line segment or a circular arc. Arcs are stored by
/// endpoints, centre and signed sweep (positive = counterclockwise about the
/// centre). The region bounded by a loop of edges lies to the left of the
/// direction of travel, so the outward normal is the right-hand normal.
struct Edge {
  enum class Kind : unsigned char { segment, arc };

  Kind kind = Kind::segment;
  Vec2 from;
  Vec2 to;
  Vec2 center;
  double sweep = 0.0;

  static Edge segment(Vec2 a, Vec2 b) { return Edge{Kind::segment, a, b, {}, 0.0}; }

  static Edge arc(Vec2 center, double radius, double start_angle, double sweep) {
    Vec2 a = center + radius * unit_at(start_angle);
    Vec2 b = std::abs(std::abs(sweep) - two_pi) == 0.0 ? a
                                                      : center + radius * unit_at(start_angle + sweep);
    return Edge{Kind::arc, a, b, center, sweep};
  }

  static Edge circle(Vec2 center, double radius) { return arc(center, radius, 0.0, two_pi); }

  bool is_arc() const { return kind == Kind::arc; }
  bool is_full_circle() const { return is_arc() && std::abs(std::abs(sweep) - two_pi) < 1e-12; }
  double radius() const { return is_arc() ? norm(from - center) : 0.0; }
  double start_angle() const { return angle_of(from - center); }

  double signed_curvature() const {
    if (!is_arc()) return 0.0;
    return (sweep > 0.0 ? 1.0 : -1.0) / radius();
  }

  double length() const { return is_arc() ? radius() * std::abs(sweep) : distance(from, to); }

  Vec2 point_at(double t) const {
    if (t <= 0.0) return from;
    if (t >= 1.0) return to;
    if (!is_arc()) return from + t * (to - from);
    return center + radius() * unit_at(start_angle() + t * sweep);
  }

  /// Unit tangent in the direction of travel.
  Vec2 tangent_at(double t) const {
    if (!is_arc()) {
      Vec2 d = to - from;
      return d / norm(d);
    }
    Vec2 radial = unit_at(start_angle() + t * sweep);
    Vec2 left{-radial.y, radial.x};
    return sweep > 0.0 ? left : -left;
  }

  /// Outward unit normal (right-hand side of the direction of travel).
  Vec2 normal_at(double t) const { return perp_right(tangent_at(t)); }

  Box bounds() const {
    Box b;
    b.expand(from);
    b.expand(to);
    if (is_arc()) {
      const double r = radius();
      const double a0 = start_angle();
      for (int q = 0; q < 4; ++q) {
        const double ang = q * 0.5 * pi;
        if (angle_in_sweep(a0, sweep, ang)) b.expand(center + r * unit_at(ang));
      }
    }
    return b;
  }

  /// Contribution of this edge to the signed area (1/2) * closed integral of x dy - y dx.
  double green_term() const {
    if (!is_arc()) return 0.5 * cross(from, to);
    const double r = radius();
    return 0.5 * (cross(center, to - from) + r * r * sweep);
  }

  Edge sub(double t0, double t1) const {
    if (!is_arc()) return segment(point_at(t0), point_at(t1));
    Edge e{Kind::arc, point_at(t0), point_at(t1), center, (t1 - t0) * sweep};
    return e;
  }

  Edge reversed() const {
    Edge e = *this;
    std::swap(e.from, e.to);
    e.sweep = -sweep;
    return e;
  }

  /// Parameter of q on this edge if q lies within `tol` of it.
  std::optional<double> param_of(Vec2 q, double tol) const {
    if (!is_arc()) {
      Vec2 d = to - from;
      const double len2 = dot(d, d);
      if (len2 == 0.0) return std::nullopt;
      const double t = dot(q - from, d) / len2;
      const double len = std::sqrt(len2);
      if (t < -tol / len || t > 1.0 + tol / len) return std::nullopt;
      if (distance(from + t * d, q) > tol) return std::nullopt;
      return std::clamp(t, 0.0, 1.0);
    }
    const double r = radius();
    if (std::abs(distance(q, center) - r) > tol) return std::nullopt;
    const double ang_tol = tol / r;
    double delta = wrap_positive(angle_of(q - center) - start_angle());
    if (sweep < 0.0) delta = delta == 0.0 ? 0.0 : delta - two_pi;
    double t = delta / sweep;
    if (t > 1.0 + ang_tol / std::abs(sweep)) {
      // q sits just before the start point on the wrapped side.
      const double alt = (delta - std::copysign(two_pi, sweep)) / sweep;
      if (alt >= -ang_tol / std::abs(sweep)) t = alt;
    }
    if (t < -ang_tol / std::abs(sweep) || t > 1.0 + ang_tol / std::abs(sweep)) return std::nullopt;
    return std::clamp(t, 0.0, 1.0);
  }

  static bool angle_in_sweep(double start, double sweep, double ang) {
    if (std::abs(sweep) >= two_pi) return true;
    double delta = wrap_positive(ang - start);
    if (sweep >= 0.0) return delta <= sweep;
    delta = delta == 0.0 ? 0.0 : two_pi - delta;
    return delta <= -sweep;
  }
};

namespace detail {

inline void circle_line_points(Vec2 c, double r, Vec2 p, Vec2 d, double tol, std::vector<Vec2>& out) {
  const double len = norm(d);
  if (len == 0.0) return;
  Vec2 u = d / len;
  const double s = dot(c - p, u);
  Vec2 foot = p + s * u;
  const double h = distance(foot, c);
  if (h > r + tol) return;
  if (std::abs(h - r) <= tol) {
    out.push_back(foot);
    return;
  }
  const double w = std::sqrt(std::max(0.0, r * r - h * h));
  out.push_back(foot - w * u);
  out.push_back(foot + w * u);
}

inline void circle_circle_points(Vec2 c1, double r1, Vec2 c2, double r2, double tol,
                                 std::vector<Vec2>& out) {
  const double d = distance(c1, c2);
  if (d <= tol) return;  // concentric: coincident arcs meet only at endpoints
  Vec2 u = (c2 - c1) / d;
  if (d > r1 + r2 + tol || d < std::abs(r1 - r2) - tol) return;
  if (std::abs(d - (r1 + r2)) <= tol) {
    out.push_back(c1 + r1 * u);
    return;
  }
  if (std::abs(d - std::abs(r1 - r2)) <= tol) {
    out.push_back(r1 >= r2 ? c1 + r1 * u : c1 - r1 * u);
    return;
  }
  const double a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
  const double h = std::sqrt(std::max(0.0, r1 * r1 - a * a));
  Vec2 m = c1 + a * u;
  Vec2 n{-u.y, u.x};
  out.push_back(m + h * n);
  out.push_back(m - h * n);
}

}  // namespace detail

/// Points where two edges meet (transversal crossings and tangencies), given
/// as parameters on `e`. Collinear or concentric overlaps are not reported;
/// those are found by testing the endpoints of one edge against the other.
inline std::vector<double> intersection_params(const Edge& e, const Edge& f, double tol) {
  std::vector<Vec2> pts;
  if (!e.is_arc() && !f.is_arc()) {
    Vec2 r = e.to - e.from;
    Vec2 s = f.to - f.from;
    const double denom = cross(r, s);
    const double scale = norm(r) * norm(s);
    if (std::abs(denom) <= 1e-14 * scale) return {};
    const double t = cross(f.from - e.from, s) / denom;
    const double u = cross(f.from - e.from, r) / denom;
    const double te = tol / norm(r);
    const double tf = tol / norm(s);
    if (t < -te || t > 1.0 + te || u < -tf || u > 1.0 + tf) return {};
    return {std::clamp(t, 0.0, 1.0)};
  }
  if (e.is_arc() && f.is_arc()) {
    detail::circle_circle_points(e.center, e.radius(), f.center, f.radius(), tol, pts);
  } else if (e.is_arc()) {
    detail::circle_line_points(e.center, e.radius(), f.from, f.to - f.from, tol, pts);
  } else {
    detail::circle_line_points(f.center, f.radius(), e.from, e.to - e.from, tol, pts);
  }
  std::vector<double> params;
  for (Vec2 p : pts) {
    auto te = e.param_of(p, 4.0 * tol);
    auto tf = f.param_of(p, 4.0 * tol);
    if (te && tf) params.push_back(*te);
  }
  return params;
}

/// Winding number contribution of one edge around point p, in turns.
/// Arcs are handled as chord plus the loop (arc, chord reversed), which winds
/// once around the points of the circular segment it encloses.
inline double winding_contribution(const Edge& e, Vec2 p) {
  Vec2 a = e.from - p;
  Vec2 b = e.to - p;
  double w = 0.0;
  if (!(e.from == e.to)) w = std::atan2(cross(a, b), dot(a, b)) / two_pi;
  if (!e.is_arc()) return w;
  const double r = e.radius();
  if (distance(p, e.center) >= r) return w;
  bool in_segment;
  if (e.from == e.to) {
    in_segment = true;
  } else {
    Vec2 mid = e.point_at(0.5);
    Vec2 chord = e.to - e.from;
    const double side_p = cross(chord, p - e.from);
    const double side_m = cross(chord, mid - e.from);
    in_segment = (side_p > 0.0) == (side_m > 0.0) && side_p != 0.0;
  }
  if (in_segment) w += (e.sweep > 0.0 ? 1.0 : -1.0);
  return w;
}

inline double loop_winding(const std::vector<Edge>& loop, Vec2 p) {
  double w = 0.0;
  for (const Edge& e : loop) w += winding_contribution(e, p);
  return w;
}

inline double loop_signed_area(const std::vector<Edge>& loop) {
  double a = 0.0;
  for (const Edge& e : loop) a += e.green_term();
  return a;
}

inline Box loop_bounds(const std::vector<Edge>& loop) {
  Box b;
  for (const Edge& e : loop) b.expand(e.bounds());
  return b;
}

/// Convex hull (counterclockwise, no collinear points) by monotone chain.
inline std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(hull[k - 1] - hull[k - 2], pts[i - 1] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i - 1];
  }
  hull.resize(k - 1);
  return hull;
}

/// Largest pairwise distance of a point set.
inline double point_set_diameter(const std::vector<Vec2>& pts) {
  std::vector<Vec2> hull = convex_hull(pts);
  double best = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i)
    for (std::size_t j = i + 1; j < hull.size(); ++j) best = std::max(best, distance(hull[i], hull[j]));
  return best;
}

}  // namespace clusterlab
