#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>

#include "clusterlab/geometry.hpp"

namespace clusterlab {

/// Read-only view of a row-major label field; cells outside the grid read as
/// label 0 (the external region).
struct LabelView {
  std::span<const std::uint8_t> labels;
  int width = 0;
  int height = 0;

  std::uint8_t at(int i, int j) const {
    if (i < 0 || j < 0 || i >= width || j >= height) return 0;
    return labels[static_cast<std::size_t>(j) * width + i];
  }
};

namespace ms {

// Each label's indicator is box-filtered over 3x3 cells (values 0..9) and
// contoured at level 4.5 with linear interpolation along plaquette edges.
inline constexpr double level = 4.5;

/// Contour length (in cell units) inside one plaquette whose corner values,
/// counterclockwise from the lower-left, are `c`.
inline double plaquette_contour(const std::array<int, 4>& c) {
  static constexpr std::array<Vec2, 4> corner{Vec2{0, 0}, Vec2{1, 0}, Vec2{1, 1}, Vec2{0, 1}};
  std::array<bool, 4> in{};
  int n_in = 0;
  for (int q = 0; q < 4; ++q) {
    in[q] = c[q] > level;
    n_in += in[q];
  }
  if (n_in == 0 || n_in == 4) return 0.0;
  std::array<Vec2, 4> cut{};
  std::array<bool, 4> has{};
  for (int q = 0; q < 4; ++q) {
    const int r = (q + 1) & 3;
    if (in[q] == in[r]) continue;
    const double t = (level - c[q]) / static_cast<double>(c[r] - c[q]);
    cut[q] = corner[q] + t * (corner[r] - corner[q]);
    has[q] = true;
  }
  if (n_in == 2 && in[0] == in[2]) {
    // Saddle: isolate the two corners whose state differs from the centre.
    const double centre = 0.25 * (c[0] + c[1] + c[2] + c[3]);
    const bool centre_in = centre > level;
    // Corner q touches edges q-1 and q.
    int a = (in[0] != centre_in) ? 0 : 1;
    int b = a + 2;
    return distance(cut[(a + 3) & 3], cut[a]) + distance(cut[(b + 3) & 3], cut[b]);
  }
  std::array<Vec2, 2> p{};
  int k = 0;
  for (int q = 0; q < 4; ++q)
    if (has[q]) p[k++] = cut[q];
  return distance(p[0], p[1]);
}

/// Half-sum over all labels of the contour length inside plaquette (i, j),
/// whose corners are the cell centres (i..i+1, j..j+1). Unit cell size.
inline double plaquette_interface(const LabelView& v, int i, int j) {
  std::uint8_t blk[4][4];
  std::uint8_t present[16];
  int n_present = 0;
  for (int dy = 0; dy < 4; ++dy) {
    for (int dx = 0; dx < 4; ++dx) {
      const std::uint8_t l = v.at(i - 1 + dx, j - 1 + dy);
      blk[dx][dy] = l;
      bool seen = false;
      for (int k = 0; k < n_present; ++k) seen = seen || present[k] == l;
      if (!seen) present[n_present++] = l;
    }
  }
  if (n_present == 1) return 0.0;
  static constexpr int qx[4] = {0, 1, 1, 0};
  static constexpr int qy[4] = {0, 0, 1, 1};
  double total = 0.0;
  for (int k = 0; k < n_present; ++k) {
    const std::uint8_t l = present[k];
    std::array<int, 4> c{};
    for (int q = 0; q < 4; ++q) {
      int n = 0;
      for (int u = 0; u < 3; ++u)
        for (int w = 0; w < 3; ++w) n += blk[qx[q] + u][qy[q] + w] == l;
      c[q] = n;
    }
    total += plaquette_contour(c);
  }
  return 0.5 * total;
}

/// True if the cell's own label holds fewer than 5 of the 9 cells around it,
/// i.e. the cell is invisible to the smoothed contour of its own label.
inline bool is_subresolution(const LabelView& v, int i, int j) {
  const std::uint8_t l = v.at(i, j);
  int n = 0;
  for (int u = -1; u <= 1; ++u)
    for (int w = -1; w <= 1; ++w) n += v.at(i + u, j + w) == l;
  return n < 5;
}

}  // namespace ms

/// Marching-squares interface length of a label field with cell size h:
/// one half of the sum over labels (external label 0 included) of each
/// label's contour length, so every interface is counted once.
inline double label_field_perimeter(const LabelView& v, double h) {
  double total = 0.0;
  for (int j = -1; j < v.height; ++j)
    for (int i = -1; i < v.width; ++i) total += ms::plaquette_interface(v, i, j);
  return total * h;
}

/// Number of unit cell edges separating differently-labelled cells
/// (cells outside the grid count as label 0).
inline long edge_count_perimeter(const LabelView& v) {
  long n = 0;
  for (int j = -1; j < v.height; ++j)
    for (int i = -1; i < v.width; ++i) {
      n += v.at(i, j) != v.at(i + 1, j) && j >= 0;
      n += v.at(i, j) != v.at(i, j + 1) && i >= 0;
    }
  return n;
}

}  // namespace clusterlab
