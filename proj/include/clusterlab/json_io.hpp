#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "clusterlab/cluster.hpp"
#include "clusterlab/errors.hpp"
#include "clusterlab/grid.hpp"
#include "clusterlab/minimizer.hpp"
#include "clusterlab/norm.hpp"
#include "clusterlab/region.hpp"

namespace clusterlab {

using json = nlohmann::ordered_json;

inline constexpr int cluster_schema_version = 1;

namespace detail {

inline json vec_json(Vec2 v) { return json::array({v.x, v.y}); }

inline Vec2 json_vec(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(ErrorCode::invalid_argument, std::string("expected [x, y] for '") + what + "'");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::invalid_argument, std::string("missing field '") + key + "'");
  return j.at(key);
}

inline double number(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number()) throw Error(ErrorCode::invalid_argument, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

inline int integer(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) throw Error(ErrorCode::invalid_argument, std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

inline json edge_json(const Edge& e) {
  json o;
  o["kind"] = e.is_arc() ? "arc" : "segment";
  o["from"] = vec_json(e.from);
  o["to"] = vec_json(e.to);
  if (e.is_arc()) {
    o["center"] = vec_json(e.center);
    o["sweep"] = e.sweep;
  }
  return o;
}

inline Edge json_edge(const json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  Edge e;
  e.from = json_vec(field(j, "from"), "from");
  e.to = json_vec(field(j, "to"), "to");
  if (kind == "arc") {
    e.kind = Edge::Kind::arc;
    e.center = json_vec(field(j, "center"), "center");
    e.sweep = number(j, "sweep");
  } else if (kind != "segment") {
    throw Error(ErrorCode::invalid_argument, "unknown edge kind '" + kind + "'");
  }
  return e;
}

// One string of '0'/'1' per grid row, row j = 0 first.
inline json mask_rows(const PixelMask& m) {
  json rows = json::array();
  for (int j = 0; j < m.height; ++j) {
    std::string row(static_cast<std::size_t>(m.width), '0');
    for (int i = 0; i < m.width; ++i)
      if (m.at(i, j)) row[static_cast<std::size_t>(i)] = '1';
    rows.push_back(row);
  }
  return rows;
}

}  // namespace detail

inline json region_to_json(const Region& region) {
  return std::visit(
      [](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        json o;
        if constexpr (std::is_same_v<T, Disk>) {
          o["type"] = "disk";
          o["center"] = detail::vec_json(r.center);
          o["radius"] = r.radius;
          if (r.orientation != 1) o["orientation"] = r.orientation;
        } else if constexpr (std::is_same_v<T, AxisRect>) {
          o["type"] = "rect";
          o["min"] = detail::vec_json(r.min);
          o["max"] = detail::vec_json(r.max);
        } else if constexpr (std::is_same_v<T, ArcPolygon>) {
          o["type"] = "arcpoly";
          json loops = json::array();
          for (const auto& loop : r.loops) {
            json edges = json::array();
            for (const Edge& e : loop) edges.push_back(detail::edge_json(e));
            loops.push_back(edges);
          }
          o["loops"] = loops;
        } else {
          o["type"] = "pixels";
          o["origin"] = detail::vec_json(r.origin);
          o["h"] = r.h;
          o["width"] = r.width;
          o["height"] = r.height;
          o["rows"] = detail::mask_rows(r);
        }
        return o;
      },
      region);
}

inline Region region_from_json(const json& j) {
  const std::string type = detail::field(j, "type").get<std::string>();
  if (type == "disk") {
    Disk d;
    d.center = detail::json_vec(detail::field(j, "center"), "center");
    d.radius = detail::number(j, "radius");
    d.orientation = j.contains("orientation") ? detail::integer(j, "orientation") : 1;
    return d;
  }
  if (type == "rect")
    return AxisRect{detail::json_vec(detail::field(j, "min"), "min"), detail::json_vec(detail::field(j, "max"), "max")};
  if (type == "arcpoly") {
    ArcPolygon p;
    for (const json& loop : detail::field(j, "loops")) {
      std::vector<Edge> edges;
      for (const json& e : loop) edges.push_back(detail::json_edge(e));
      p.loops.push_back(std::move(edges));
    }
    return p;
  }
  if (type == "pixels") {
    PixelMask m;
    m.origin = detail::json_vec(detail::field(j, "origin"), "origin");
    m.h = detail::number(j, "h");
    m.width = detail::integer(j, "width");
    m.height = detail::integer(j, "height");
    const json& rows = detail::field(j, "rows");
    if (m.width <= 0 || m.height <= 0 || !rows.is_array() || rows.size() != static_cast<std::size_t>(m.height))
      throw Error(ErrorCode::invalid_argument, "pixel rows do not match the height");
    m.cells.reserve(static_cast<std::size_t>(m.width) * m.height);
    for (const json& row : rows) {
      const std::string s = row.get<std::string>();
      if (s.size() != static_cast<std::size_t>(m.width)) throw Error(ErrorCode::invalid_argument, "pixel row length mismatch");
      for (char ch : s) {
        if (ch != '0' && ch != '1') throw Error(ErrorCode::invalid_argument, "pixel rows hold only '0' and '1'");
        m.cells.push_back(ch == '1');
      }
    }
    return m;
  }
  throw Error(ErrorCode::invalid_argument, "unknown region type '" + type + "'");
}

inline json cluster_to_json(const Cluster& c) {
  json o;
  o["format"] = "clusterlab.cluster";
  o["version"] = cluster_schema_version;
  json regions = json::array();
  for (const auto& r : c.regions) regions.push_back(region_to_json(r));
  o["regions"] = regions;
  return o;
}

/// Parses and validates; overlapping regions are rejected.
inline Cluster cluster_from_json(const json& j) {
  if (detail::field(j, "format") != "clusterlab.cluster")
    throw Error(ErrorCode::invalid_argument, "not a cluster document");
  if (detail::integer(j, "version") != cluster_schema_version)
    throw Error(ErrorCode::invalid_argument, "unsupported cluster schema version");
  Cluster c;
  for (const json& r : detail::field(j, "regions")) c.regions.push_back(region_from_json(r));
  validate(c);
  return c;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::invalid_argument, origin + ": " + e.what());
  }
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::invalid_argument, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

inline Cluster load_cluster(const std::string& path) { return cluster_from_json(parse_json_text(read_text_file(path), path)); }

inline void save_cluster(const std::string& path, const Cluster& c) { write_text_file(path, dump(cluster_to_json(c))); }

/// {"unit_ball": [[x, y], ...], "name": optional}
inline Norm norm_from_json(const json& j) {
  std::vector<Vec2> ball;
  for (const json& v : detail::field(j, "unit_ball")) ball.push_back(detail::json_vec(v, "unit_ball"));
  return Norm::polygonal(std::move(ball), j.value("name", std::string("polygonal")));
}

inline json grid_to_json(const GridCluster& g) {
  json o;
  o["width"] = g.width;
  o["height"] = g.height;
  o["h"] = g.h;
  o["origin"] = detail::vec_json(g.origin);
  o["targets"] = g.targets;
  json rows = json::array();
  for (int j = 0; j < g.height; ++j) {
    std::string row;
    for (int i = 0; i < g.width; ++i) {
      if (i) row += ' ';
      row += std::to_string(g.at(i, j));
    }
    rows.push_back(row);
  }
  o["labels"] = rows;
  return o;
}

inline GridCluster grid_from_json(const json& j) {
  GridCluster g;
  g.width = detail::integer(j, "width");
  g.height = detail::integer(j, "height");
  g.h = detail::number(j, "h");
  g.origin = detail::json_vec(detail::field(j, "origin"), "origin");
  g.targets = detail::field(j, "targets").get<std::vector<double>>();
  const json& rows = detail::field(j, "labels");
  if (g.width <= 0 || g.height <= 0 || rows.size() != static_cast<std::size_t>(g.height))
    throw Error(ErrorCode::invalid_argument, "label rows do not match the height");
  for (const json& row : rows) {
    std::istringstream in(row.get<std::string>());
    int v = 0, n = 0;
    while (in >> v) {
      if (v < 0 || v > static_cast<int>(g.targets.size())) throw Error(ErrorCode::invalid_argument, "label out of range");
      g.labels.push_back(static_cast<std::uint8_t>(v));
      ++n;
    }
    if (n != g.width) throw Error(ErrorCode::invalid_argument, "label row length mismatch");
  }
  return g;
}

inline json anneal_config_to_json(const AnnealConfig& c) {
  json o;
  o["initial_temperature"] = c.initial_temperature;
  o["final_temperature"] = c.final_temperature;
  o["cooling"] = c.cooling;
  o["sweeps_per_temperature"] = c.sweeps_per_temperature;
  o["lambda"] = c.lambda;
  o["area_tolerance"] = c.area_tolerance;
  o["seed"] = c.seed;
  return o;
}

inline AnnealConfig anneal_config_from_json(const json& j) {
  AnnealConfig c;
  c.initial_temperature = detail::number(j, "initial_temperature");
  c.final_temperature = detail::number(j, "final_temperature");
  c.cooling = detail::number(j, "cooling");
  c.sweeps_per_temperature = detail::number(j, "sweeps_per_temperature");
  c.lambda = detail::number(j, "lambda");
  c.area_tolerance = detail::number(j, "area_tolerance");
  c.seed = detail::field(j, "seed").get<std::uint64_t>();
  return c;
}

inline json minimize_result_to_json(const MinimizeResult& r) {
  json o;
  o["format"] = "clusterlab.minimize";
  o["version"] = 1;
  o["config"] = anneal_config_to_json(r.config);
  o["p_estimate"] = r.p_estimate;
  o["energy"] = r.energy;
  o["success"] = r.success;
  o["area_errors"] = r.area_errors;
  o["areas"] = r.grid.areas();
  o["region_perimeters"] = r.region_perimeters;
  // A pixel region's boundary is all reduced boundary, so the per-region
  // gap P(E_k) - H1(boundary of E_k) is zero on every grid output.
  o["region_gaps"] = std::vector<double>(r.region_perimeters.size(), 0.0);
  o["boundary_connected"] = r.boundary_connected;
  o["boundary_components"] = r.boundary_components;
  o["triple_points"] = r.triple_points;
  o["boundary_diameter"] = r.boundary_components > 0 ? grid_boundary_diameter(r.grid) : 0.0;
  o["proposals"] = r.proposals;
  o["accepted"] = r.accepted;
  o["best_energy_trace"] = r.best_energy_trace;
  o["grid"] = grid_to_json(r.grid);
  return o;
}

}  // namespace clusterlab
