#include <gtest/gtest.h>

#include <filesystem>

#include "clusterlab/area_spec.hpp"
#include "clusterlab/double_bubble.hpp"
#include "clusterlab/json_io.hpp"
#include "clusterlab/manifest.hpp"
#include "clusterlab/report.hpp"
#include "clusterlab/svg.hpp"

using namespace clusterlab;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no clusterlab::Error thrown";
  return ErrorCode::invalid_argument;
}

Cluster mixed_cluster() {
  Cluster c = build_double_bubble(0.05);
  c.regions.push_back(Disk{{2.0, 0.1}, 0.3});
  c.regions.push_back(AxisRect{{3.0, -1.0}, {3.5, 0.25}});
  PixelMask m;
  m.origin = {-3.0, -2.0};
  m.h = 0.125;
  m.width = 4;
  m.height = 3;
  m.cells = {1, 1, 0, 0, 0, 1, 1, 0, 0, 0, 1, 1};
  c.regions.push_back(m);
  return c;
}

}  // namespace

TEST(AreaSpec, GeometricTailClosedForm) {
  const AreaSpec s = parse_area_spec("geom:0.1,0.25@3");
  ASSERT_EQ(s.areas.size(), 3u);
  EXPECT_DOUBLE_EQ(s.areas[2], 0.1 * 0.0625);
  // sqrt(0.1) * 0.5^3 / (1 - 0.5)
  EXPECT_NEAR(s.sqrt_tail, std::sqrt(0.1) * 0.25, 1e-15);
  EXPECT_NEAR(s.sqrt_sum(), 2.0 * std::sqrt(0.1), 1e-15);
}

TEST(AreaSpec, ListsAndTruncation) {
  const AreaSpec s = parse_area_spec("list:1,1");
  EXPECT_EQ(s.areas, (std::vector<double>{1.0, 1.0}));
  EXPECT_EQ(s.sqrt_tail, 0.0);
  const AreaSpec t = parse_area_spec("list:0.25,0.04,0.01@1");
  EXPECT_EQ(t.areas.size(), 1u);
  EXPECT_NEAR(t.sqrt_tail, 0.3, 1e-15);
  const AreaSpec q = parse_area_spec("pow4:1,2,2");
  EXPECT_EQ(q.areas, (std::vector<double>{0.25, 0.0625, 0.0625}));
}

TEST(AreaSpec, PowerFamilyTailIsZetaRemainder) {
  const AreaSpec s = parse_area_spec("pow:4", 10);
  ASSERT_EQ(s.areas.size(), 10u);
  // sum_{k>10} 1/k^2 = pi^2/6 - H_10^(2)
  double h = 0.0;
  for (int k = 1; k <= 10; ++k) h += 1.0 / (k * k);
  EXPECT_NEAR(s.sqrt_tail, pi * pi / 6.0 - h, 1e-14);
}

TEST(AreaSpec, DivergentAndMalformed) {
  EXPECT_EQ(code_of([] { parse_area_spec("invsq"); }), ErrorCode::hypothesis_violated);
  EXPECT_EQ(code_of([] { parse_area_spec("invsq@5"); }), ErrorCode::hypothesis_violated);
  EXPECT_EQ(code_of([] { parse_area_spec("pow:2@5"); }), ErrorCode::hypothesis_violated);
  EXPECT_EQ(code_of([] { parse_area_spec("geom:1,1@5"); }), ErrorCode::hypothesis_violated);
  EXPECT_EQ(code_of([] { parse_area_spec("geom:1,0.5"); }), ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([] { parse_area_spec("list:1,x"); }), ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([] { parse_area_spec("list:1@0"); }), ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([] { parse_area_spec("spiral:1"); }), ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([] { parse_area_spec("list:-1"); }), ErrorCode::invalid_argument);
}

TEST(ClusterJson, RoundTripIsByteIdentical) {
  const Cluster c = mixed_cluster();
  const std::string first = dump(cluster_to_json(c));
  const Cluster back = cluster_from_json(parse_json_text(first, "memory"));
  ASSERT_EQ(back.size(), c.size());
  EXPECT_EQ(dump(cluster_to_json(back)), first);
  const auto a = measures(c), b = measures(back);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k], b[k]);
}

TEST(ClusterJson, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "clusterlab_io_test.json";
  save_cluster(path.string(), mixed_cluster());
  const Cluster back = load_cluster(path.string());
  EXPECT_EQ(dump(cluster_to_json(back)), dump(cluster_to_json(mixed_cluster())));
  std::filesystem::remove(path);
  EXPECT_THROW(load_cluster(path.string()), Error);
}

TEST(ClusterJson, RejectsBadDocuments) {
  EXPECT_THROW(parse_json_text("{", "memory"), Error);
  EXPECT_THROW(cluster_from_json(json::object()), Error);
  json j = cluster_to_json(mixed_cluster());
  j["version"] = 99;
  EXPECT_THROW(cluster_from_json(j), Error);
  json overlap = cluster_to_json(Cluster{{Disk{{0, 0}, 1.0}, Disk{{0.5, 0}, 1.0}}});
  EXPECT_THROW(cluster_from_json(overlap), Error);
  json neg = cluster_to_json(Cluster{{Disk{{0, 0}, 1.0}}});
  neg["regions"][0]["radius"] = -1.0;
  EXPECT_THROW(cluster_from_json(neg), Error);
}

TEST(GridJson, RoundTrip) {
  GridCluster g;
  g.width = 5;
  g.height = 4;
  g.h = 0.2;
  g.origin = {0.5, -1.0};
  g.targets = {0.08, 0.04};
  g.labels.assign(20, 0);
  g.labels[6] = 1;
  g.labels[7] = 1;
  g.labels[12] = 2;
  const std::string text = dump(grid_to_json(g));
  const GridCluster back = grid_from_json(parse_json_text(text, "memory"));
  EXPECT_EQ(back.labels, g.labels);
  EXPECT_EQ(back.targets, g.targets);
  EXPECT_EQ(dump(grid_to_json(back)), text);
  json bad = grid_to_json(g);
  bad["labels"][0] = "0 0 9 0 0";
  EXPECT_THROW(grid_from_json(bad), Error);
}

TEST(Svg, UnitDiskIsOneCircle) {
  const std::string s = render_svg(Cluster{{Disk{{0, 0}, 1.0}}});
  std::size_t circles = 0;
  for (std::size_t p = s.find("<circle"); p != std::string::npos; p = s.find("<circle", p + 1)) ++circles;
  EXPECT_EQ(circles, 1u);
  EXPECT_EQ(s.find("<path"), std::string::npos);
  EXPECT_NE(s.find("r=\"1\""), std::string::npos);
}

TEST(Svg, Deterministic) {
  const std::string a = render_svg(mixed_cluster());
  EXPECT_EQ(a, render_svg(mixed_cluster()));
  EXPECT_NE(a.find(" A"), std::string::npos);  // double bubble arcs
  EXPECT_EQ(a.rfind("</svg>\n"), a.size() - 7);
}

TEST(Report, EmptyAndAggregate) {
  const json empty = build_report({});
  EXPECT_EQ(empty["format"], "clusterlab.report");
  EXPECT_TRUE(empty["runs"].empty());
  EXPECT_TRUE(empty["all_passed"].get<bool>());

  json a;
  a["format"] = "clusterlab.perimeter";
  a["value"] = 1.5;
  a["ignored"] = "x";
  a["checks"] = checks_to_json({{"floor", true, ""}});
  json b;
  b["format"] = "clusterlab.exponent";
  b["checks"] = checks_to_json({{"sum", false, "grew 50%"}});
  const json r = build_report({a, b});
  ASSERT_EQ(r["runs"].size(), 2u);
  EXPECT_EQ(r["runs"][0]["value"], 1.5);
  EXPECT_FALSE(r["runs"][0].contains("ignored"));
  ASSERT_EQ(r["checks"].size(), 2u);
  EXPECT_EQ(r["checks"][1]["source"], "clusterlab.exponent");
  EXPECT_FALSE(r["all_passed"].get<bool>());
  EXPECT_THROW(build_report({json::object()}), Error);
}

TEST(Manifest, RoundTrip) {
  RunManifest m;
  m.command = "gen";
  m.arguments = {"--seed", "7", "gen", "squares", "--depth", "2"};
  m.seed = 7;
  m.inputs = {};
  m.outputs = {{"out.json", std::string(64, 'a')}};
  const std::string text = dump(manifest_to_json(m));
  const RunManifest back = manifest_from_json(parse_json_text(text, "memory"));
  EXPECT_EQ(back.arguments, m.arguments);
  EXPECT_EQ(back.seed, 7u);
  EXPECT_EQ(back.outputs[0].sha256, m.outputs[0].sha256);
  EXPECT_EQ(dump(manifest_to_json(back)), text);
  EXPECT_THROW(manifest_from_json(json::object()), Error);
}
