#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "clusterlab/errors.hpp"
#include "clusterlab/geometry.hpp"
#include "clusterlab/marching_squares.hpp"
#include "clusterlab/region.hpp"

namespace clusterlab {

/// Label field on a uniform grid; label 0 is the external region. Cell
/// (i, j) covers origin + h*[i, i+1] x h*[j, j+1].
struct GridCluster {
  int width = 0;
  int height = 0;
  double h = 1.0;
  Vec2 origin;
  std::vector<std::uint8_t> labels;  // row-major
  std::vector<double> targets;       // a_1..a_N

  int regions() const { return static_cast<int>(targets.size()); }
  LabelView view() const { return {labels, width, height}; }
  std::uint8_t at(int i, int j) const { return view().at(i, j); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * width + i; }
  Vec2 cell_centre(int i, int j) const { return origin + h * Vec2{i + 0.5, j + 0.5}; }

  std::vector<long> counts() const {
    std::vector<long> c(targets.size() + 1, 0);
    for (auto l : labels) ++c[l];
    return c;
  }
  std::vector<double> areas() const {
    auto c = counts();
    std::vector<double> a;
    for (std::size_t k = 1; k < c.size(); ++k) a.push_back(static_cast<double>(c[k]) * h * h);
    return a;
  }
  /// Marching-squares interface length, every interface counted once.
  double perimeter() const { return label_field_perimeter(view(), h); }
  /// The region as a pixel mask on the same grid.
  PixelMask mask(int label) const {
    PixelMask m{origin, h, width, height, std::vector<std::uint8_t>(labels.size())};
    for (std::size_t k = 0; k < labels.size(); ++k) m.cells[k] = labels[k] == label;
    return m;
  }
};

inline bool same_geometry(const GridCluster& a, const GridCluster& b) {
  return a.width == b.width && a.height == b.height && a.h == b.h && a.origin == b.origin;
}

/// True if some 4-neighbour (outside cells read as 0) has a different label.
inline bool is_boundary_cell(const GridCluster& g, int i, int j) {
  const auto l = g.at(i, j);
  return g.at(i - 1, j) != l || g.at(i + 1, j) != l || g.at(i, j - 1) != l || g.at(i, j + 1) != l;
}

struct BoundaryConnectivity {
  bool connected = false;
  int components = 0;
};

/// Components of the boundary cells under 8-adjacency.
inline BoundaryConnectivity boundary_connectivity(const GridCluster& g) {
  const std::size_t n = g.labels.size();
  std::vector<int> parent(n, -1);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int j = 0; j < g.height; ++j)
    for (int i = 0; i < g.width; ++i)
      if (is_boundary_cell(g, i, j)) parent[g.index(i, j)] = static_cast<int>(g.index(i, j));
  for (int j = 0; j < g.height; ++j)
    for (int i = 0; i < g.width; ++i) {
      const int a = static_cast<int>(g.index(i, j));
      if (parent[a] < 0) continue;
      for (auto [di, dj] : {std::pair{1, 0}, {-1, 1}, {0, 1}, {1, 1}}) {
        const int x = i + di, y = j + dj;
        if (x < 0 || y < 0 || x >= g.width || y >= g.height) continue;
        const int b = static_cast<int>(g.index(x, y));
        if (parent[b] < 0) continue;
        parent[find(a)] = find(b);
      }
    }
  BoundaryConnectivity out;
  for (std::size_t k = 0; k < n; ++k)
    if (parent[k] == static_cast<int>(k)) ++out.components;
  out.connected = out.components == 1;
  return out;
}

namespace detail {

inline constexpr double edt_far = 1e20;

/// Squared Euclidean distance transform along one line (lower envelope of
/// parabolas). Unmarked samples carry edt_far.
inline void edt_1d(const double* f, double* d, int n, int* v, double* z) {
  const double inf = std::numeric_limits<double>::infinity();
  int k = 0;
  v[0] = 0;
  z[0] = -inf;
  z[1] = inf;
  for (int q = 1; q < n; ++q) {
    double s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * q - 2.0 * v[k]);
    while (s <= z[k]) {
      --k;
      s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * q - 2.0 * v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = inf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

/// Squared distance (in cells) from every cell to the nearest marked cell.
inline std::vector<double> distance_transform(const std::vector<char>& marked, int w, int h) {
  std::vector<double> g(marked.size());
  for (std::size_t k = 0; k < marked.size(); ++k) g[k] = marked[k] ? 0.0 : edt_far;
  const int n = std::max(w, h);
  std::vector<double> f(n), d(n), z(static_cast<std::size_t>(n) + 1);
  std::vector<int> v(n);
  for (int i = 0; i < w; ++i) {
    for (int j = 0; j < h; ++j) f[j] = g[static_cast<std::size_t>(j) * w + i];
    edt_1d(f.data(), d.data(), h, v.data(), z.data());
    for (int j = 0; j < h; ++j) g[static_cast<std::size_t>(j) * w + i] = d[j];
  }
  for (int j = 0; j < h; ++j) {
    edt_1d(&g[static_cast<std::size_t>(j) * w], d.data(), w, v.data(), z.data());
    std::copy(d.begin(), d.begin() + w, g.begin() + static_cast<std::ptrdiff_t>(j) * w);
  }
  return g;
}

inline std::vector<char> boundary_marks(const GridCluster& g) {
  std::vector<char> m(g.labels.size(), 0);
  for (int j = 0; j < g.height; ++j)
    for (int i = 0; i < g.width; ++i) m[g.index(i, j)] = is_boundary_cell(g, i, j);
  return m;
}

}  // namespace detail

/// Symmetric Hausdorff distance between the boundary-cell centre sets.
/// Infinite if exactly one of the two boundaries is empty.
inline double boundary_hausdorff_distance(const GridCluster& a, const GridCluster& b) {
  if (!same_geometry(a, b)) throw Error(ErrorCode::invalid_argument, "grids differ in size, spacing or origin");
  const auto ma = detail::boundary_marks(a), mb = detail::boundary_marks(b);
  const bool ea = std::none_of(ma.begin(), ma.end(), [](char c) { return c; });
  const bool eb = std::none_of(mb.begin(), mb.end(), [](char c) { return c; });
  if (ea && eb) return 0.0;
  if (ea || eb) return std::numeric_limits<double>::infinity();
  const auto da = detail::distance_transform(ma, a.width, a.height);
  const auto db = detail::distance_transform(mb, b.width, b.height);
  double worst = 0.0;
  for (std::size_t k = 0; k < ma.size(); ++k) {
    if (ma[k]) worst = std::max(worst, db[k]);
    if (mb[k]) worst = std::max(worst, da[k]);
  }
  return std::sqrt(worst) * a.h;
}

/// Copy of `g` translated by whole cells; vacated cells become external.
inline GridCluster shifted(const GridCluster& g, int di, int dj) {
  GridCluster out = g;
  std::fill(out.labels.begin(), out.labels.end(), 0);
  for (int j = 0; j < g.height; ++j)
    for (int i = 0; i < g.width; ++i) {
      const int x = i + di, y = j + dj;
      if (x >= 0 && y >= 0 && x < g.width && y < g.height) out.labels[out.index(x, y)] = g.labels[g.index(i, j)];
    }
  return out;
}

/// Centroid of all non-external cells, in cell units.
inline Vec2 occupied_centroid(const GridCluster& g) {
  Vec2 s;
  long n = 0;
  for (int j = 0; j < g.height; ++j)
    for (int i = 0; i < g.width; ++i)
      if (g.labels[g.index(i, j)]) {
        s = s + Vec2{i + 0.5, j + 0.5};
        ++n;
      }
  return n ? s / static_cast<double>(n) : s;
}

/// Hausdorff distance after translating `b` so the occupied centroids agree
/// to the nearest cell.
inline double aligned_boundary_hausdorff(const GridCluster& a, const GridCluster& b) {
  const Vec2 d = occupied_centroid(a) - occupied_centroid(b);
  return boundary_hausdorff_distance(a, shifted(b, static_cast<int>(std::lround(d.x)), static_cast<int>(std::lround(d.y))));
}

/// Midpoints of the unit edges separating differently labelled cells; the
/// diameter of this set estimates the diameter of the cluster boundary.
inline double grid_boundary_diameter(const GridCluster& g) {
  std::vector<Vec2> pts;
  for (int j = -1; j < g.height; ++j)
    for (int i = -1; i < g.width; ++i) {
      if (j >= 0 && g.at(i, j) != g.at(i + 1, j)) pts.push_back(g.origin + g.h * Vec2{i + 1.0, j + 0.5});
      if (i >= 0 && g.at(i, j) != g.at(i, j + 1)) pts.push_back(g.origin + g.h * Vec2{i + 0.5, j + 1.0});
    }
  if (pts.empty()) throw Error(ErrorCode::empty_boundary, "grid has no interfaces");
  return point_set_diameter(pts);
}

/// 2x2 cell blocks holding three or more labels.
inline int triple_points(const GridCluster& g) {
  int n = 0;
  for (int j = -1; j < g.height; ++j)
    for (int i = -1; i < g.width; ++i) {
      std::array<std::uint8_t, 4> c{g.at(i, j), g.at(i + 1, j), g.at(i, j + 1), g.at(i + 1, j + 1)};
      std::sort(c.begin(), c.end());
      n += (std::unique(c.begin(), c.end()) - c.begin()) >= 3;
    }
  return n;
}

struct Window {
  int i0, j0, i1, j1;  // half-open cell range [i0, i1) x [j0, j1)
};

enum class Occupancy { empty, full, mixed };

inline const char* to_string(Occupancy o) {
  switch (o) {
    case Occupancy::empty: return "empty";
    case Occupancy::full: return "full";
    case Occupancy::mixed: return "mixed";
  }
  return "unknown";
}

struct LocalityResult {
  std::vector<Occupancy> occupancy;     // per region 1..N
  std::vector<bool> boundary_in_window;  // per region 1..N
};

/// Classifies each region inside a rectangular window. A rectangle is
/// 4-connected, so a region with no boundary cell in the window must fill it
/// or miss it; a violation is an internal error.
inline LocalityResult locality_check(const GridCluster& g, const Window& w) {
  if (w.i0 < 0 || w.j0 < 0 || w.i1 > g.width || w.j1 > g.height || w.i0 >= w.i1 || w.j0 >= w.j1)
    throw Error(ErrorCode::invalid_argument, "window must be a nonempty rectangle inside the grid");
  const int n = g.regions();
  std::vector<long> inside(static_cast<std::size_t>(n) + 1, 0);
  std::vector<bool> boundary(static_cast<std::size_t>(n) + 1, false);
  for (int j = w.j0; j < w.j1; ++j)
    for (int i = w.i0; i < w.i1; ++i) {
      const auto l = g.at(i, j);
      ++inside[l];
      // Cell (i, j) is a boundary cell of every label it or a neighbour has,
      // whenever those labels differ.
      for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
        const auto m = g.at(i + di, j + dj);
        if (m != l) {
          boundary[l] = true;
          boundary[m] = true;
        }
      }
    }
  const long cells = static_cast<long>(w.i1 - w.i0) * (w.j1 - w.j0);
  LocalityResult out;
  for (int k = 1; k <= n; ++k) {
    const Occupancy o = inside[k] == 0 ? Occupancy::empty : inside[k] == cells ? Occupancy::full : Occupancy::mixed;
    if (!boundary[k] && o == Occupancy::mixed)
      throw std::logic_error("region is split inside a window that misses its boundary");
    out.occupancy.push_back(o);
    out.boundary_in_window.push_back(boundary[k]);
  }
  return out;
}

}  // namespace clusterlab
