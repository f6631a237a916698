#include <gtest/gtest.h>

#include <random>

#include "clusterlab/geometry.hpp"

using namespace clusterlab;

TEST(Edge, FullCircleGreenTermIsDiskArea) {
  Edge c = Edge::circle({0.3, -0.2}, 1.5);
  EXPECT_NEAR(c.green_term(), pi * 2.25, 1e-13);
  EXPECT_NEAR(c.length(), two_pi * 1.5, 1e-13);
}

TEST(Edge, ArcParameterRoundTrip) {
  for (double sweep : {1.0, -1.0, 4.0, -5.5}) {
    Edge e = Edge::arc({1, 2}, 0.7, 2.5, sweep);
    for (double t : {0.0, 0.1, 0.5, 0.93, 1.0}) {
      auto back = e.param_of(e.point_at(t), 1e-12);
      ASSERT_TRUE(back.has_value()) << sweep << " " << t;
      EXPECT_NEAR(*back, t, 1e-12);
    }
    EXPECT_FALSE(e.param_of(e.center, 1e-12).has_value());
  }
}

TEST(Edge, NormalPointsRightOfTravel) {
  Edge ccw = Edge::circle({0, 0}, 1.0);
  Vec2 n = ccw.normal_at(0.0);
  EXPECT_NEAR(n.x, 1.0, 1e-15);
  Edge seg = Edge::segment({0, 0}, {1, 0});
  EXPECT_NEAR(seg.normal_at(0.5).y, -1.0, 1e-15);
}

TEST(Edge, SubArcLengthsAddUp) {
  Edge e = Edge::arc({0, 0}, 2.0, 0.3, 2.0);
  EXPECT_NEAR(e.sub(0.0, 0.4).length() + e.sub(0.4, 1.0).length(), e.length(), 1e-13);
  EXPECT_NEAR(e.sub(0.0, 0.4).green_term() + e.sub(0.4, 1.0).green_term(), e.green_term(), 1e-13);
}

TEST(Winding, HalfDiskLoop) {
  std::vector<Edge> loop{Edge::segment({-1, 0}, {1, 0}), Edge::arc({0, 0}, 1.0, 0.0, pi)};
  EXPECT_NEAR(loop_winding(loop, {0.1, 0.5}), 1.0, 1e-12);
  EXPECT_NEAR(loop_winding(loop, {0.1, -0.5}), 0.0, 1e-12);
  EXPECT_NEAR(loop_winding(loop, {0.0, 1.2}), 0.0, 1e-12);
  EXPECT_NEAR(loop_signed_area(loop), pi / 2, 1e-13);
}

TEST(Intersections, CircleCircleAndTangency) {
  Edge a = Edge::circle({0, 0}, 1.0);
  Edge b = Edge::circle({1, 0}, 1.0);
  EXPECT_EQ(intersection_params(a, b, 1e-12).size(), 2u);
  Edge c = Edge::circle({2, 0}, 1.0);
  auto t = intersection_params(a, c, 1e-12);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_NEAR(a.point_at(t[0]).x, 1.0, 1e-12);
}

TEST(Intersections, SegmentsCross) {
  auto t = intersection_params(Edge::segment({0, 0}, {2, 2}), Edge::segment({0, 2}, {2, 0}), 1e-12);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_NEAR(t[0], 0.5, 1e-15);
}

TEST(Hull, DiameterMatchesBruteForce) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Vec2> pts;
  for (int i = 0; i < 300; ++i) pts.push_back({u(rng), u(rng)});
  double brute = 0.0;
  for (auto& p : pts)
    for (auto& q : pts) brute = std::max(brute, distance(p, q));
  EXPECT_DOUBLE_EQ(point_set_diameter(pts), brute);
}
