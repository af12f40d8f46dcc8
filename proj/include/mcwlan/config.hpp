#pragma once

// Topology files (JSON). Layout:
//
//   {
//     "name": "path4",                      optional label
//     "note": "...",                        optional free text
//     "cells": [{"id": 1, "x": 0, "y": 0, "n_nodes": 5}, ...],
//     "r_cs": 45.0,                         carrier-sense range, meters
//     "edges": [[1, 2], [2, 3]],            explicit edges win over geometry
//     "channels": 3,                        number of channels M
//     "assignments": {"name": [1, 2, ...]}, named channel vectors
//     "traffic": "saturated" | "tcp_download",
//     "mac": { MacParams fields by name, SI units }
//   }
//
// Ids are 1-based and must cover 1..N. Unknown keys are rejected.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mcwlan/dcf.hpp"
#include "mcwlan/multicell.hpp"
#include "mcwlan/topology.hpp"

namespace mcwlan {

struct Topology {
  std::string name;
  std::string note;
  std::vector<CellSpec> cells;  // sorted by id
  std::optional<double> r_cs;
  std::optional<std::vector<std::pair<int, int>>> edges;
  std::optional<int> channels;
  std::map<std::string, std::vector<int>> assignments;
  TrafficMode traffic = TrafficMode::saturated;
  MacParams mac;

  bool operator==(const Topology&) const = default;
};

Topology parse_topology(const nlohmann::json& doc);
Topology load_topology(const std::filesystem::path& path);
nlohmann::json to_json(const Topology& t);
void save_topology(const Topology& t, const std::filesystem::path& path);

// Explicit edges if present, else geometry and r_cs. A single cell needs
// neither.
ContentionGraph physical_graph(const Topology& t);

// Looks up a named assignment, or parses a comma-separated channel list.
ChannelAssignment resolve_assignment(const Topology& t, const std::string& spec,
                                     std::optional<int> M = std::nullopt);

MacParams parse_mac(const nlohmann::json& j, MacParams base = {});
nlohmann::json mac_to_json(const MacParams& p);

TrafficMode parse_traffic(const std::string& s);
const char* traffic_name(TrafficMode m);

}  // namespace mcwlan
