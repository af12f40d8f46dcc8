#include "mcwlan/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "mcwlan/errors.hpp"

namespace mcwlan {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& where) {
  std::set<std::string> ok(known.begin(), known.end());
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!ok.count(it.key()))
      throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

template <typename T>
T get_as(const json& j, const std::string& what) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(what + " has the wrong type");
  }
}

int get_int(const json& j, const std::string& what) {
  if (!j.is_number_integer() && !j.is_number_unsigned())
    throw ConfigError(what + " must be an integer");
  return j.get<int>();
}

double get_number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ConfigError(what + " must be a number");
  return j.get<double>();
}

}  // namespace

TrafficMode parse_traffic(const std::string& s) {
  if (s == "saturated" || s == "sat") return TrafficMode::saturated;
  if (s == "tcp_download" || s == "tcp") return TrafficMode::tcp_download;
  throw ConfigError("traffic mode must be saturated or tcp_download, got '" + s + "'");
}

const char* traffic_name(TrafficMode m) {
  return m == TrafficMode::saturated ? "saturated" : "tcp_download";
}

MacParams parse_mac(const json& j, MacParams p) {
  if (!j.is_object()) throw ConfigError("mac must be an object");
  reject_unknown(j,
                 {"slot_time", "sifs", "difs", "phy_header_time", "mac_header_bits",
                  "ack_bits", "rts_bits", "cts_bits", "data_rate", "control_rate",
                  "mac_header_at_control_rate", "payload_bits", "payload_bytes",
                  "tcp_data_bits", "tcp_ack_bits", "cw_min", "backoff_doubling_cap",
                  "retry_limit", "access_mode", "backoff_convention"},
                 "mac");
  auto num = [&](const char* key, double& field) {
    if (j.contains(key)) field = get_number(j[key], std::string("mac.") + key);
  };
  auto integer = [&](const char* key, int& field) {
    if (j.contains(key)) field = get_int(j[key], std::string("mac.") + key);
  };
  num("slot_time", p.slot_time);
  num("sifs", p.sifs);
  num("difs", p.difs);
  num("phy_header_time", p.phy_header_time);
  num("mac_header_bits", p.mac_header_bits);
  num("ack_bits", p.ack_bits);
  num("rts_bits", p.rts_bits);
  num("cts_bits", p.cts_bits);
  num("data_rate", p.data_rate);
  num("control_rate", p.control_rate);
  num("payload_bits", p.payload_bits);
  if (j.contains("payload_bytes"))
    p.payload_bits = 8.0 * get_number(j["payload_bytes"], "mac.payload_bytes");
  num("tcp_data_bits", p.tcp_data_bits);
  num("tcp_ack_bits", p.tcp_ack_bits);
  integer("cw_min", p.cw_min);
  integer("backoff_doubling_cap", p.backoff_doubling_cap);
  integer("retry_limit", p.retry_limit);
  if (j.contains("mac_header_at_control_rate"))
    p.mac_header_at_control_rate =
        get_as<bool>(j["mac_header_at_control_rate"], "mac.mac_header_at_control_rate");
  if (j.contains("access_mode")) {
    const auto s = get_as<std::string>(j["access_mode"], "mac.access_mode");
    if (s == "basic")
      p.access_mode = AccessMode::basic;
    else if (s == "rtscts")
      p.access_mode = AccessMode::rtscts;
    else
      throw ConfigError("mac.access_mode must be basic or rtscts");
  }
  if (j.contains("backoff_convention")) {
    const auto s = get_as<std::string>(j["backoff_convention"], "mac.backoff_convention");
    if (s == "half_window")
      p.backoff_convention = BackoffConvention::half_window;
    else if (s == "half_window_minus_one")
      p.backoff_convention = BackoffConvention::half_window_minus_one;
    else
      throw ConfigError("mac.backoff_convention must be half_window or half_window_minus_one");
  }
  p.validate();
  return p;
}

json mac_to_json(const MacParams& p) {
  return json{
      {"slot_time", p.slot_time},
      {"sifs", p.sifs},
      {"difs", p.difs},
      {"phy_header_time", p.phy_header_time},
      {"mac_header_bits", p.mac_header_bits},
      {"ack_bits", p.ack_bits},
      {"rts_bits", p.rts_bits},
      {"cts_bits", p.cts_bits},
      {"data_rate", p.data_rate},
      {"control_rate", p.control_rate},
      {"mac_header_at_control_rate", p.mac_header_at_control_rate},
      {"payload_bits", p.payload_bits},
      {"tcp_data_bits", p.tcp_data_bits},
      {"tcp_ack_bits", p.tcp_ack_bits},
      {"cw_min", p.cw_min},
      {"backoff_doubling_cap", p.backoff_doubling_cap},
      {"retry_limit", p.retry_limit},
      {"access_mode", p.access_mode == AccessMode::basic ? "basic" : "rtscts"},
      {"backoff_convention", p.backoff_convention == BackoffConvention::half_window
                                 ? "half_window"
                                 : "half_window_minus_one"},
  };
}

Topology parse_topology(const json& doc) {
  if (!doc.is_object()) throw ConfigError("topology must be a JSON object");
  reject_unknown(doc,
                 {"name", "note", "cells", "r_cs", "edges", "channels",
                  "assignments", "traffic", "mac"},
                 "topology");
  Topology t;
  if (doc.contains("name")) t.name = get_as<std::string>(doc["name"], "name");
  if (doc.contains("note")) t.note = get_as<std::string>(doc["note"], "note");
  if (!doc.contains("cells") || !doc["cells"].is_array() || doc["cells"].empty())
    throw ConfigError("topology needs a non-empty 'cells' array");

  for (const json& c : doc["cells"]) {
    if (!c.is_object()) throw ConfigError("each cell must be an object");
    reject_unknown(c, {"id", "x", "y", "n_nodes"}, "cell");
    if (!c.contains("id")) throw ConfigError("cell without id");
    CellSpec spec;
    spec.id = get_int(c["id"], "cell.id");
    if (c.contains("x") != c.contains("y"))
      throw ConfigError("cell " + std::to_string(spec.id) + " needs both x and y");
    if (c.contains("x"))
      spec.position = Point{get_number(c["x"], "cell.x"), get_number(c["y"], "cell.y")};
    if (c.contains("n_nodes")) spec.n_nodes = get_int(c["n_nodes"], "cell.n_nodes");
    if (spec.n_nodes < 1)
      throw ConfigError("cell " + std::to_string(spec.id) + " needs n_nodes >= 1");
    t.cells.push_back(spec);
  }
  std::sort(t.cells.begin(), t.cells.end(),
            [](const CellSpec& a, const CellSpec& b) { return a.id < b.id; });
  const int n = static_cast<int>(t.cells.size());
  if (n > kMaxCells) throw ConfigError("at most 64 cells are supported");
  for (int i = 0; i < n; ++i)
    if (t.cells[i].id != i + 1)
      throw ConfigError("cell ids must be unique and cover 1..N");

  if (doc.contains("r_cs")) {
    t.r_cs = get_number(doc["r_cs"], "r_cs");
    if (!(*t.r_cs > 0.0)) throw ConfigError("r_cs must be positive");
  }
  if (doc.contains("edges")) {
    if (!doc["edges"].is_array()) throw ConfigError("edges must be an array of pairs");
    std::vector<std::pair<int, int>> edges;
    for (const json& e : doc["edges"]) {
      if (!e.is_array() || e.size() != 2) throw ConfigError("each edge must be [i, j]");
      const int a = get_int(e[0], "edge endpoint"), b = get_int(e[1], "edge endpoint");
      if (a < 1 || a > n || b < 1 || b > n || a == b)
        throw ConfigError("edge [" + std::to_string(a) + ", " + std::to_string(b) +
                          "] is not between two distinct cells");
      edges.emplace_back(a, b);
    }
    t.edges = std::move(edges);
  }
  if (doc.contains("channels")) {
    t.channels = get_int(doc["channels"], "channels");
    if (*t.channels < 1) throw ConfigError("channels must be at least 1");
  }
  if (doc.contains("assignments")) {
    if (!doc["assignments"].is_object()) throw ConfigError("assignments must be an object");
    for (auto it = doc["assignments"].begin(); it != doc["assignments"].end(); ++it) {
      auto v = get_as<std::vector<int>>(it.value(), "assignment " + it.key());
      if (static_cast<int>(v.size()) != n)
        throw ConfigError("assignment " + it.key() + " must have one channel per cell");
      t.assignments[it.key()] = std::move(v);
    }
  }
  if (doc.contains("traffic"))
    t.traffic = parse_traffic(get_as<std::string>(doc["traffic"], "traffic"));
  if (doc.contains("mac")) t.mac = parse_mac(doc["mac"]);
  return t;
}

Topology load_topology(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open topology file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
  return parse_topology(doc);
}

json to_json(const Topology& t) {
  json doc = json::object();
  if (!t.name.empty()) doc["name"] = t.name;
  if (!t.note.empty()) doc["note"] = t.note;
  json cells = json::array();
  for (const CellSpec& c : t.cells) {
    json jc = {{"id", c.id}};
    if (c.position) {
      jc["x"] = c.position->x;
      jc["y"] = c.position->y;
    }
    jc["n_nodes"] = c.n_nodes;
    cells.push_back(jc);
  }
  doc["cells"] = cells;
  if (t.r_cs) doc["r_cs"] = *t.r_cs;
  if (t.edges) {
    json e = json::array();
    for (auto [a, b] : *t.edges) e.push_back({a, b});
    doc["edges"] = e;
  }
  if (t.channels) doc["channels"] = *t.channels;
  if (!t.assignments.empty()) doc["assignments"] = t.assignments;
  doc["traffic"] = traffic_name(t.traffic);
  doc["mac"] = mac_to_json(t.mac);
  return doc;
}

void save_topology(const Topology& t, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << to_json(t).dump(2) << '\n';
}

ContentionGraph physical_graph(const Topology& t) {
  const int n = static_cast<int>(t.cells.size());
  if (t.edges) return ContentionGraph::from_edges(n, *t.edges, GraphKind::physical);
  if (t.r_cs) return build_physical_graph(t.cells, *t.r_cs);
  if (n == 1) return ContentionGraph(1);
  throw ConfigError("topology needs either 'edges' or cell positions with 'r_cs'");
}

ChannelAssignment resolve_assignment(const Topology& t, const std::string& spec,
                                     std::optional<int> M) {
  std::vector<int> channels;
  if (auto it = t.assignments.find(spec); it != t.assignments.end()) {
    channels = it->second;
  } else {
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        std::size_t used = 0;
        channels.push_back(std::stoi(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ConfigError("'" + spec + "' is neither a named assignment nor a channel list");
      }
    }
  }
  if (channels.size() != t.cells.size())
    throw ConfigError("assignment '" + spec + "' must have one channel per cell");
  int m = M.value_or(t.channels.value_or(0));
  m = std::max(m, *std::max_element(channels.begin(), channels.end()));
  for (int c : channels)
    if (c < 1) throw ConfigError("channels are numbered from 1");
  return {channels, m};
}

}  // namespace mcwlan
