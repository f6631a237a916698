#pragma once

#include <string>
#include <vector>

#include "clusterlab/json_io.hpp"

namespace clusterlab {

inline constexpr int report_schema_version = 1;

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

inline json checks_to_json(const std::vector<Check>& checks) {
  json a = json::array();
  for (const auto& c : checks) {
    json o;
    o["name"] = c.name;
    o["passed"] = c.passed;
    if (!c.detail.empty()) o["detail"] = c.detail;
    a.push_back(o);
  }
  return a;
}

namespace detail {

// Keys copied from each command output into its report entry.
inline const std::vector<std::string>& summary_keys() {
  static const std::vector<std::string> keys{
      "generator",        "depth",           "min_radius",        "disk_count",         "coverage",
      "radius_sums",      "alpha_hat",       "alpha_bracket",     "perimeter_partial_sums", "functional",
      "value",            "standard_error",  "interface_length",  "wulff_floors",       "isoperimetric_floors",
      "p_sequence",       "p_bar",           "monotone",          "bounded",            "p_estimate",
      "success",          "boundary_connected", "gap",           "area_spec"};
  return keys;
}

}  // namespace detail

/// Aggregates command outputs (each a JSON document with "format" and an
/// optional "checks" array) into one summary. Inputs without a "format"
/// field are rejected.
inline json build_report(const std::vector<json>& outputs) {
  json runs = json::array();
  json checks = json::array();
  bool all = true;
  for (const json& out : outputs) {
    if (!out.is_object() || !out.contains("format") || !out["format"].is_string())
      throw Error(ErrorCode::invalid_argument, "report input is not a cluster-lab output");
    json entry;
    entry["format"] = out["format"];
    for (const auto& key : detail::summary_keys())
      if (out.contains(key)) entry[key] = out[key];
    runs.push_back(entry);
    if (out.contains("checks"))
      for (const json& c : out["checks"]) {
        json item = c;
        item["source"] = out["format"];
        all = all && c.value("passed", false);
        checks.push_back(item);
      }
  }
  json r;
  r["format"] = "clusterlab.report";
  r["version"] = report_schema_version;
  r["runs"] = runs;
  r["checks"] = checks;
  r["all_passed"] = all;
  return r;
}

}  // namespace clusterlab
