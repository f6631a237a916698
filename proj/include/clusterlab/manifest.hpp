#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clusterlab/json_io.hpp"

namespace clusterlab {

inline constexpr const char* tool_version = "0.1.0";

struct FileDigest {
  std::string path;
  std::string sha256;
};

/// Everything needed to rerun a command: its arguments (global flags
/// included), the seed, and digests of what it read and wrote.
struct RunManifest {
  std::string command;
  std::vector<std::string> arguments;
  std::uint64_t seed = 0;
  std::string version = tool_version;
  std::vector<FileDigest> inputs;
  std::vector<FileDigest> outputs;
};

namespace detail {

inline json digests_json(const std::vector<FileDigest>& v) {
  json a = json::array();
  for (const auto& d : v) a.push_back(json{{"path", d.path}, {"sha256", d.sha256}});
  return a;
}

inline std::vector<FileDigest> json_digests(const json& a) {
  std::vector<FileDigest> v;
  for (const json& d : a) v.push_back({d.at("path").get<std::string>(), d.at("sha256").get<std::string>()});
  return v;
}

}  // namespace detail

inline json manifest_to_json(const RunManifest& m) {
  json o;
  o["format"] = "clusterlab.manifest";
  o["version"] = 1;
  o["tool_version"] = m.version;
  o["command"] = m.command;
  o["arguments"] = m.arguments;
  o["seed"] = m.seed;
  o["inputs"] = detail::digests_json(m.inputs);
  o["outputs"] = detail::digests_json(m.outputs);
  return o;
}

inline RunManifest manifest_from_json(const json& j) {
  if (!j.is_object() || j.value("format", std::string{}) != "clusterlab.manifest")
    throw Error(ErrorCode::invalid_argument, "not a run manifest");
  try {
    RunManifest m;
    m.version = j.at("tool_version").get<std::string>();
    m.command = j.at("command").get<std::string>();
    m.arguments = j.at("arguments").get<std::vector<std::string>>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.inputs = detail::json_digests(j.at("inputs"));
    m.outputs = detail::json_digests(j.at("outputs"));
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_argument, std::string("malformed manifest: ") + e.what());
  }
}

}  // namespace clusterlab
