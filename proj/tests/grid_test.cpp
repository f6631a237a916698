#include <gtest/gtest.h>

#include <random>

#include "clusterlab/grid.hpp"

using namespace clusterlab;

namespace {

GridCluster blank(int w, int h, int regions) {
  GridCluster g;
  g.width = w;
  g.height = h;
  g.h = 1.0 / w;
  g.labels.assign(static_cast<std::size_t>(w) * h, 0);
  g.targets.assign(static_cast<std::size_t>(regions), 0.0);
  return g;
}

void paint_disk(GridCluster& g, double cx, double cy, double r, std::uint8_t label) {
  for (int j = 0; j < g.height; ++j)
    for (int i = 0; i < g.width; ++i) {
      const Vec2 p = g.cell_centre(i, j);
      if ((p.x - cx) * (p.x - cx) + (p.y - cy) * (p.y - cy) < r * r) g.labels[g.index(i, j)] = label;
    }
}

GridCluster random_field(std::mt19937_64& rng, int w, int h, int regions) {
  GridCluster g = blank(w, h, regions);
  std::uniform_int_distribution<int> lab(0, regions), pos(0, std::max(w, h) - 1), size(1, 12);
  // Random rectangles give fields with real interiors, unlike iid noise.
  for (int k = 0; k < 12; ++k) {
    const int x = pos(rng) % w, y = pos(rng) % h, sw = size(rng), sh = size(rng);
    const auto l = static_cast<std::uint8_t>(lab(rng));
    for (int j = y; j < std::min(h, y + sh); ++j)
      for (int i = x; i < std::min(w, x + sw); ++i) g.labels[g.index(i, j)] = l;
  }
  return g;
}

}  // namespace

TEST(Grid, CountsAreasAndMask) {
  GridCluster g = blank(8, 8, 2);
  g.labels[g.index(1, 1)] = 1;
  g.labels[g.index(2, 1)] = 1;
  g.labels[g.index(5, 5)] = 2;
  EXPECT_EQ(g.counts(), (std::vector<long>{61, 2, 1}));
  EXPECT_DOUBLE_EQ(g.areas()[0], 2.0 / 64.0);
  EXPECT_EQ(g.mask(1).count(), 2);
}

TEST(Connectivity, TwoFarDisksAndEmpty) {
  GridCluster g = blank(128, 128, 2);
  paint_disk(g, 0.25, 0.25, 0.1, 1);
  paint_disk(g, 0.75, 0.75, 0.1, 2);
  const auto c = boundary_connectivity(g);
  EXPECT_EQ(c.components, 2);
  EXPECT_FALSE(c.connected);
  const auto e = boundary_connectivity(blank(16, 16, 1));
  EXPECT_EQ(e.components, 0);
  GridCluster touching = blank(128, 128, 2);
  paint_disk(touching, 0.4, 0.5, 0.1, 1);
  paint_disk(touching, 0.6, 0.5, 0.1, 2);
  EXPECT_TRUE(boundary_connectivity(touching).connected);
}

TEST(Hausdorff, IdenticalDilatedAndMismatched) {
  GridCluster g = blank(64, 64, 1);
  paint_disk(g, 0.5, 0.5, 0.2, 1);
  EXPECT_EQ(boundary_hausdorff_distance(g, g), 0.0);
  // Grow by one cell in the 4-neighbour sense.
  GridCluster d = g;
  for (int j = 0; j < 64; ++j)
    for (int i = 0; i < 64; ++i)
      if (g.at(i, j) == 0 && (g.at(i + 1, j) || g.at(i - 1, j) || g.at(i, j + 1) || g.at(i, j - 1))) d.labels[d.index(i, j)] = 1;
  const double hd = boundary_hausdorff_distance(g, d);
  EXPECT_GT(hd, 0.0);
  EXPECT_LE(hd, g.h * std::sqrt(2.0) + 1e-15);
  GridCluster other = blank(32, 32, 1);
  EXPECT_THROW(boundary_hausdorff_distance(g, other), Error);
  EXPECT_TRUE(std::isinf(boundary_hausdorff_distance(g, blank(64, 64, 1))));
}

TEST(Hausdorff, DistanceTransformMatchesBruteForce) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const int w = 5 + static_cast<int>(rng() % 20), h = 5 + static_cast<int>(rng() % 20);
    std::vector<char> marks(static_cast<std::size_t>(w) * h, 0);
    for (auto& m : marks) m = rng() % 9 == 0;
    marks[rng() % marks.size()] = 1;
    const auto dt = detail::distance_transform(marks, w, h);
    for (int j = 0; j < h; ++j)
      for (int i = 0; i < w; ++i) {
        double best = 1e300;
        for (int y = 0; y < h; ++y)
          for (int x = 0; x < w; ++x)
            if (marks[static_cast<std::size_t>(y) * w + x]) best = std::min(best, double((x - i) * (x - i) + (y - j) * (y - j)));
        EXPECT_EQ(dt[static_cast<std::size_t>(j) * w + i], best);
      }
  }
}

TEST(Hausdorff, AlignmentRemovesTranslation) {
  GridCluster g = blank(64, 64, 1);
  paint_disk(g, 0.4, 0.45, 0.15, 1);
  const GridCluster moved = shifted(g, 7, -3);
  EXPECT_GT(boundary_hausdorff_distance(g, moved), 0.1);
  EXPECT_EQ(aligned_boundary_hausdorff(g, moved), 0.0);
}

TEST(Diameter, EdgeMidpoints) {
  GridCluster g = blank(10, 10, 1);
  for (int j = 2; j < 5; ++j)
    for (int i = 2; i < 6; ++i) g.labels[g.index(i, j)] = 1;
  // Farthest midpoints: (2, 2.5) and (6, 4.5) in cell units, or (2.5, 2) and (5.5, 5).
  EXPECT_NEAR(grid_boundary_diameter(g), g.h * std::max(std::hypot(4.0, 2.0), std::hypot(3.0, 3.0)), 1e-15);
  EXPECT_THROW(grid_boundary_diameter(blank(4, 4, 1)), Error);
}

TEST(TriplePoints, TJunction) {
  GridCluster g = blank(16, 16, 2);
  for (int j = 4; j < 12; ++j)
    for (int i = 4; i < 12; ++i) g.labels[g.index(i, j)] = i < 8 ? 1 : 2;
  EXPECT_EQ(triple_points(g), 2);
}

TEST(Locality, InsideAndAcross) {
  GridCluster g = blank(32, 32, 2);
  for (int j = 0; j < 32; ++j)
    for (int i = 8; i < 24; ++i) g.labels[g.index(i, j)] = i < 16 ? 1 : 2;
  auto in = locality_check(g, {9, 3, 14, 10});
  EXPECT_EQ(in.occupancy, (std::vector<Occupancy>{Occupancy::full, Occupancy::empty}));
  EXPECT_FALSE(in.boundary_in_window[0]);
  auto across = locality_check(g, {12, 0, 20, 5});
  EXPECT_EQ(across.occupancy, (std::vector<Occupancy>{Occupancy::mixed, Occupancy::mixed}));
  EXPECT_TRUE(across.boundary_in_window[0]);
  EXPECT_THROW(locality_check(g, {0, 0, 33, 4}), Error);
  EXPECT_THROW(locality_check(g, {4, 4, 4, 8}), Error);
}

TEST(Locality, DichotomyOnRandomWindows) {
  std::mt19937_64 rng(17);
  int without_boundary = 0;
  for (int f = 0; f < 100; ++f) {
    const GridCluster g = random_field(rng, 40, 40, 3);
    for (int t = 0; t < 100; ++t) {
      const int i0 = static_cast<int>(rng() % 40), j0 = static_cast<int>(rng() % 40);
      const int i1 = i0 + 1 + static_cast<int>(rng() % (40 - i0)), j1 = j0 + 1 + static_cast<int>(rng() % (40 - j0));
      const auto r = locality_check(g, {i0, j0, i1, j1});
      for (std::size_t k = 0; k < r.occupancy.size(); ++k)
        if (!r.boundary_in_window[k]) {
          ++without_boundary;
          EXPECT_NE(r.occupancy[k], Occupancy::mixed);
        }
    }
  }
  EXPECT_GT(without_boundary, 1000);
}
