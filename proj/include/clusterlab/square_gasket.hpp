#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "clusterlab/cluster.hpp"
#include "clusterlab/errors.hpp"
#include "clusterlab/region.hpp"

namespace clusterlab {

/// m with a == 4^{-m}, m >= 1; -1 if a is not such a power.
inline int quarter_power(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) return -1;
  int e = 0;
  const double mant = std::frexp(a, &e);  // a = mant * 2^e, mant in [0.5, 1)
  if (mant != 0.5) return -1;
  const int p = e - 1;  // a = 2^p
  if (p >= 0 || p % 2 != 0) return -1;
  return -p / 2;
}

/// Tiles the unit square with squares of the given areas, each a power of
/// 1/4. Largest squares are placed first, each into the smallest free
/// quadtree cell that fits; split cells are used upper-right, upper-left,
/// lower-right, lower-left, so the lower-left corner is refined last.
/// Regions keep the input order. Coordinates are exact dyadic rationals.
inline Cluster build_square_gasket(const std::vector<double>& areas) {
  if (areas.empty()) throw Error(ErrorCode::invalid_argument, "no areas given");
  std::vector<int> level(areas.size());
  for (std::size_t k = 0; k < areas.size(); ++k) {
    level[k] = quarter_power(areas[k]);
    if (level[k] < 1)
      throw Error(ErrorCode::invalid_argument,
                  "area at index " + std::to_string(k) + " is not a power of 1/4 below 1");
  }
  std::vector<std::size_t> order(areas.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return level[a] < level[b]; });

  struct Cell {
    long long i, j;  // lower-left corner in units of 2^{-level}
    int level;
  };
  const int max_level = *std::max_element(level.begin(), level.end());
  std::vector<std::vector<Cell>> free(static_cast<std::size_t>(max_level) + 1);
  free[0].push_back({0, 0, 0});
  std::vector<Region> placed(areas.size());
  for (std::size_t k : order) {
    const int m = level[k];
    int l = m;
    while (l >= 0 && free[l].empty()) --l;
    if (l < 0)
      throw Error(ErrorCode::invalid_argument,
                  "areas exceed the unit square at index " + std::to_string(k));
    Cell c = free[l].back();
    free[l].pop_back();
    while (c.level < m) {
      const long long i = 2 * c.i, j = 2 * c.j;
      const int cl = c.level + 1;
      free[cl].push_back({i, j, cl});          // lower-left
      free[cl].push_back({i + 1, j, cl});      // lower-right
      free[cl].push_back({i, j + 1, cl});      // upper-left
      c = {i + 1, j + 1, cl};                  // upper-right, used now
    }
    const double side = std::ldexp(1.0, -m);
    placed[k] = AxisRect{{c.i * side, c.j * side}, {(c.i + 1) * side, (c.j + 1) * side}};
  }
  for (const auto& f : free)
    if (!f.empty()) throw Error(ErrorCode::invalid_argument, "areas sum to less than 1 (last index " +
                                                                 std::to_string(areas.size() - 1) + ")");
  return Cluster{std::move(placed)};
}

/// Areas of the self-similar pattern: three squares of area 4^{-k} at each
/// level k = 1..depth, then one closing square of area 4^{-depth}.
inline std::vector<double> square_gasket_areas(int depth) {
  if (depth < 1) throw Error(ErrorCode::invalid_argument, "depth must be at least 1");
  std::vector<double> a;
  for (int k = 1; k <= depth; ++k)
    for (int q = 0; q < 3; ++q) a.push_back(std::ldexp(1.0, -2 * k));
  a.push_back(std::ldexp(1.0, -2 * depth));
  return a;
}

}  // namespace clusterlab
