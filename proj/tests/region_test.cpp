#include <gtest/gtest.h>

#include <random>

#include "clusterlab/region.hpp"

using namespace clusterlab;

namespace {

PixelMask raster_disk(double r, double h, Vec2 c = {0, 0}) {
  PixelMask m;
  const int n = static_cast<int>(std::ceil(2 * r / h)) + 4;
  m.origin = c - Vec2{n * h / 2, n * h / 2};
  m.h = h;
  m.width = m.height = n;
  m.cells.assign(static_cast<std::size_t>(n) * n, 0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      m.cells[static_cast<std::size_t>(j) * n + i] = distance(m.origin + h * Vec2{i + 0.5, j + 0.5}, c) < r;
  return m;
}

ArcPolygon upper_half_disk() { return {{{Edge::segment({-1, 0}, {1, 0}), Edge::arc({0, 0}, 1.0, 0.0, pi)}}}; }

}  // namespace

TEST(Area, ClosedForms) {
  EXPECT_DOUBLE_EQ(area(Disk{{0, 0}, 1.0}), pi);
  EXPECT_DOUBLE_EQ(area(AxisRect{{0, 0}, {1, 1}}), 1.0);
}

TEST(Area, HalfDiskMatchesMonteCarloCount) {
  const double exact = area(upper_half_disk());
  EXPECT_NEAR(exact, pi / 2, 1e-14);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(-1, 1), uy(0, 1);
  const int n = 10000;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    const double x = ux(rng), y = uy(rng);
    hits += x * x + y * y < 1.0;
  }
  const double p = static_cast<double>(hits) / n;
  const double mc = 2.0 * p;
  const double se = 2.0 * std::sqrt(p * (1 - p) / n);
  EXPECT_NEAR(exact, mc, 4 * se);
  Region r = upper_half_disk();
  for (int i = 0; i < 2000; ++i) {
    const double x = ux(rng), y = 2 * uy(rng) - 1;
    EXPECT_EQ(contains(r, {x, y}), y > 0 && x * x + y * y < 1.0) << x << " " << y;
  }
}

TEST(Perimeter, ClosedForms) {
  EXPECT_DOUBLE_EQ(region_perimeter(Disk{{0, 0}, 1.0}), two_pi);
  EXPECT_DOUBLE_EQ(region_perimeter(AxisRect{{0, 0}, {2, 2}}), 8.0);
  EXPECT_NEAR(region_perimeter(upper_half_disk()), pi + 2, 1e-14);
}

TEST(Perimeter, RasterDiskWithinTwoPercent) {
  const double p = region_perimeter(raster_disk(1.0, 1.0 / 128));
  EXPECT_NEAR(p / two_pi, 1.0, 0.02);
}

TEST(Perimeter, RasterSquareAndDiagonalLine) {
  PixelMask sq;
  sq.h = 0.01;
  sq.width = sq.height = 120;
  sq.cells.assign(120 * 120, 0);
  for (int j = 10; j < 110; ++j)
    for (int i = 10; i < 110; ++i) sq.cells[j * 120 + i] = 1;
  EXPECT_NEAR(region_perimeter(sq) / 4.0, 1.0, 0.02);
}

TEST(Perimeter, IsoperimetricFloor) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 2.0);
  for (int i = 0; i < 50; ++i) {
    Region d = Disk{{u(rng), u(rng)}, u(rng)};
    Region r = AxisRect{{0, 0}, {u(rng), u(rng)}};
    for (const Region* x : {&d, &r}) {
      const double p = region_perimeter(*x);
      EXPECT_GE(p * p, 4 * pi * area(*x) * (1 - 1e-12));
    }
    const double rad = u(rng);
    PixelMask m = raster_disk(rad, rad / 40);
    const double p = region_perimeter(m);
    EXPECT_GE(p * p, 4 * pi * area(m) * 0.98);
  }
}

TEST(Validate, RejectsDegenerateRegions) {
  EXPECT_THROW(area(Disk{{0, 0}, 0.0}), Error);
  EXPECT_THROW(area(AxisRect{{0, 0}, {1, 0}}), Error);
  ArcPolygon open{{{Edge::segment({0, 0}, {1, 0}), Edge::segment({1, 0}, {1, 1})}}};
  EXPECT_THROW(validate(open), Error);
  ArcPolygon cw{{{Edge::segment({0, 0}, {0, 1}), Edge::segment({0, 1}, {1, 1}), Edge::segment({1, 1}, {0, 0})}}};
  try {
    validate(cw);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_region);
  }
}

TEST(Validate, PixelMaskIsUnsupportedForExactBoundary) {
  try {
    boundary_loops(raster_disk(1, 0.1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unsupported_representation);
  }
}
