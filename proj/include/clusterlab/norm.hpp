#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "clusterlab/cluster.hpp"
#include "clusterlab/errors.hpp"
#include "clusterlab/geometry.hpp"
#include "clusterlab/region.hpp"

namespace clusterlab {

/// A norm on the plane: Euclidean, or polygonal with a convex centrally
/// symmetric unit ball. A polygonal norm is the support function of the dual
/// polygon, phi(v) = max_i <w_i, v>, where w_i satisfies <w_i, b> = 1 on
/// the i-th unit-ball edge.
class Norm {
 public:
  static Norm euclidean() { return Norm{}; }

  static Norm manhattan() { return polygonal({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, "manhattan"); }

  static Norm polygonal(std::vector<Vec2> ball, std::string name = "polygonal") {
    if (ball.size() < 4 || ball.size() % 2 != 0)
      throw Error(ErrorCode::invalid_argument, "unit ball needs an even number (>= 4) of vertices");
    for (Vec2 v : ball)
      if (!std::isfinite(v.x) || !std::isfinite(v.y) || norm(v) == 0.0)
        throw Error(ErrorCode::invalid_argument, "unit ball vertices must be finite and nonzero");
    std::sort(ball.begin(), ball.end(), [](Vec2 a, Vec2 b) { return wrap_positive(angle_of(a)) < wrap_positive(angle_of(b)); });
    double scale = 0.0;
    for (Vec2 v : ball) scale = std::max(scale, norm(v));
    const std::size_t n = ball.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 a = ball[i], b = ball[(i + 1) % n], c = ball[(i + 2) % n];
      if (!(cross(b - a, c - b) > 1e-12 * scale * scale))
        throw Error(ErrorCode::invalid_argument, "unit ball is not strictly convex at vertex " + std::to_string(i));
      if (distance(ball[(i + n / 2) % n], -a) > 1e-12 * scale)
        throw Error(ErrorCode::invalid_argument, "unit ball is not centrally symmetric");
    }
    Norm out;
    out.polygonal_ = true;
    out.name_ = std::move(name);
    out.ball_ = std::move(ball);
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 a = out.ball_[i], b = out.ball_[(i + 1) % n];
      const double det = cross(a, b);
      out.dual_.push_back(Vec2{b.y - a.y, a.x - b.x} / det);
    }
    return out;
  }

  bool is_polygonal() const { return polygonal_; }
  const std::string& name() const { return name_; }
  const std::vector<Vec2>& unit_ball() const { return ball_; }
  /// Vertices of the Wulff shape (the dual polygon), counterclockwise.
  const std::vector<Vec2>& wulff_vertices() const { return dual_; }

  double operator()(Vec2 v) const {
    if (!polygonal_) return norm(v);
    double m = -std::numeric_limits<double>::infinity();
    for (Vec2 w : dual_) m = std::max(m, dot(w, v));
    return m;
  }

  /// Area of the Wulff shape {x : <x, v> <= phi(v) for all v}.
  double wulff_area() const {
    if (!polygonal_) return pi;
    double a = 0.0;
    for (std::size_t i = 0; i < dual_.size(); ++i) a += cross(dual_[i], dual_[(i + 1) % dual_.size()]);
    return 0.5 * a;
  }

  /// Integral of phi(u(theta)) over theta in [a, b], u the unit vector at
  /// angle theta. Exact: phi is a single cosine between consecutive
  /// unit-ball vertex angles.
  double angular_integral(double a, double b) const {
    if (!polygonal_) return b - a;
    std::vector<double> cuts{a, b};
    for (Vec2 v : ball_) {
      const double base = angle_of(v);
      for (double k = std::floor((a - base) / two_pi); base + k * two_pi <= b; k += 1.0) {
        const double t = base + k * two_pi;
        if (t > a && t < b) cuts.push_back(t);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double t0 = cuts[k], t1 = cuts[k + 1];
      if (t1 <= t0) continue;
      const Vec2 mid = unit_at(0.5 * (t0 + t1));
      std::size_t best = 0;
      for (std::size_t i = 1; i < dual_.size(); ++i)
        if (dot(dual_[i], mid) > dot(dual_[best], mid)) best = i;
      const Vec2 w = dual_[best];
      total += w.x * (std::sin(t1) - std::sin(t0)) - w.y * (std::cos(t1) - std::cos(t0));
    }
    return total;
  }

 private:
  bool polygonal_ = false;
  std::string name_ = "euclidean";
  std::vector<Vec2> ball_;
  std::vector<Vec2> dual_;
};

/// Integral of phi(outward normal) along one edge.
inline double anisotropic_length(const Edge& e, const Norm& phi) {
  if (!e.is_arc()) return phi(e.normal_at(0.5)) * e.length();
  // phi is even, so the normal's sign (which flips with sweep direction)
  // does not matter; only the angular range swept does.
  const double a0 = e.start_angle();
  const double lo = e.sweep > 0.0 ? a0 : a0 + e.sweep;
  return e.radius() * phi.angular_integral(lo, lo + std::abs(e.sweep));
}

inline double anisotropic_perimeter(const Region& region, const Norm& phi) {
  if (!is_exact(region))
    throw Error(ErrorCode::unsupported_representation, "anisotropic perimeter needs an exact boundary");
  validate(region);
  double total = 0.0;
  for (const auto& loop : boundary_loops(region))
    for (const Edge& e : loop) total += anisotropic_length(e, phi);
  return total;
}

/// Half-sum of the anisotropic perimeters of the union and of each region.
inline double anisotropic_cluster_perimeter(const Cluster& c, const Norm& phi) {
  validate(c);
  double sum = 0.0;
  for (const auto& r : c.regions) sum += anisotropic_perimeter(r, phi);
  auto prep = detail::prepare(c);
  double ext = 0.0;
  for (const auto& p : detail::classify_boundary(prep))
    if (p.neighbor < 0) ext += anisotropic_length(p.edge, phi);
  return 0.5 * (ext + sum);
}

/// Least anisotropic perimeter at area a, attained by the scaled Wulff shape.
inline double wulff_lower_bound(double a, const Norm& phi) {
  if (!(a > 0.0)) throw Error(ErrorCode::invalid_argument, "area must be positive");
  return 2.0 * std::sqrt(a * phi.wulff_area());
}

}  // namespace clusterlab
