#include "lapnet/graph_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "lapnet/json_out.hpp"

namespace lapnet {

namespace {

std::size_t line_at(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

// Line of the i-th edge object: the i-th `"u"` key after the "edges" key.
std::size_t edge_line(std::string_view text, std::size_t index) {
  std::size_t pos = text.find("\"edges\"");
  if (pos == std::string_view::npos) return 1;
  for (std::size_t k = 0; k <= index; ++k) {
    std::size_t next = text.find("\"u\"", pos + 1);
    if (next == std::string_view::npos) return line_at(text, pos);
    pos = next;
  }
  return line_at(text, pos);
}

Vertex read_endpoint(const nlohmann::json& e, const char* key, std::string_view text,
                     std::size_t i) {
  if (!e.contains(key)) throw GraphFormatError(std::string("edge missing \"") + key + "\"", edge_line(text, i));
  const auto& val = e.at(key);
  if (!val.is_number_integer()) {
    throw GraphFormatError(std::string("edge field \"") + key + "\" must be an integer",
                           edge_line(text, i));
  }
  auto x = val.get<std::int64_t>();
  if (x < 0) throw GraphFormatError("negative vertex index", edge_line(text, i));
  return x;
}

}  // namespace

GraphSystem read_graph_json(std::string_view text, LoadMode mode) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw GraphFormatError(e.what(), line_at(text, e.byte));
  }
  if (!doc.is_object()) throw GraphFormatError("document must be a JSON object", 1);
  for (const auto& [key, _] : doc.items()) {
    if (key != "format" && key != "labels" && key != "edges") {
      auto pos = text.find("\"" + key + "\"");
      throw GraphFormatError("unknown key \"" + key + "\"", line_at(text, pos));
    }
  }
  if (!doc.contains("format") || doc["format"] != std::string(kGraphFormat)) {
    auto pos = text.find("\"format\"");
    throw GraphFormatError("format must be \"" + std::string(kGraphFormat) + "\"",
                           pos == std::string_view::npos ? 1 : line_at(text, pos));
  }
  if (!doc.contains("edges") || !doc["edges"].is_array()) {
    throw GraphFormatError("missing \"edges\" array", 1);
  }

  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    const auto& l = doc["labels"];
    if (!l.is_array()) throw GraphFormatError("\"labels\" must be an array", line_at(text, text.find("\"labels\"")));
    for (const auto& s : l) {
      if (!s.is_string()) throw GraphFormatError("labels must be strings", line_at(text, text.find("\"labels\"")));
      labels.push_back(s.get<std::string>());
    }
  }

  std::vector<Edge> edges;
  std::map<std::pair<Vertex, Vertex>, std::size_t> seen;
  Vertex max_vertex = -1;
  const auto& arr = doc["edges"];
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& e = arr[i];
    if (!e.is_object()) throw GraphFormatError("edge must be an object", edge_line(text, i));
    for (const auto& [key, _] : e.items()) {
      if (key != "u" && key != "v" && key != "c") {
        throw GraphFormatError("unknown edge key \"" + key + "\"", edge_line(text, i));
      }
    }
    Edge edge;
    edge.u = read_endpoint(e, "u", text, i);
    edge.v = read_endpoint(e, "v", text, i);
    if (!e.contains("c") || !e["c"].is_number()) {
      throw GraphFormatError("edge needs a numeric \"c\"", edge_line(text, i));
    }
    edge.c = e["c"].get<double>();
    if (mode == LoadMode::strict) {
      if (edge.u == edge.v) {
        throw GraphFormatError("self-loop at vertex " + std::to_string(edge.u), edge_line(text, i));
      }
      if (!(edge.c > 0.0) || !std::isfinite(edge.c)) {
        throw GraphFormatError("conductance must be positive", edge_line(text, i));
      }
      auto key = std::pair(std::min(edge.u, edge.v), std::max(edge.u, edge.v));
      if (!seen.emplace(key, i).second) {
        throw GraphFormatError("duplicate edge (" + std::to_string(key.first) + "," +
                                   std::to_string(key.second) + ")",
                               edge_line(text, i));
      }
    }
    max_vertex = std::max({max_vertex, edge.u, edge.v});
    edges.push_back(edge);
  }

  std::size_t n = labels.empty() ? static_cast<std::size_t>(max_vertex + 1) : labels.size();
  if (!labels.empty() && max_vertex >= static_cast<Vertex>(labels.size())) {
    throw GraphFormatError("edge endpoint " + std::to_string(max_vertex) + " has no label", 1);
  }
  if (n == 0) throw GraphFormatError("graph has no vertices", 1);
  if (mode == LoadMode::strict) return GraphSystem::finite(n, std::move(edges), std::move(labels));
  return GraphSystem::finite_unchecked(n, std::move(edges), std::move(labels));
}

GraphSystem load_graph_file(const std::string& path, LoadMode mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GraphError("cannot open graph file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_graph_json(buf.str(), mode);
}

std::string write_graph_json(const GraphSystem& g) {
  nlohmann::json doc;
  doc["format"] = std::string(kGraphFormat);
  if (!g.labels().empty()) doc["labels"] = g.labels();
  auto edges = nlohmann::json::array();
  for (const auto& e : g.edges()) {
    edges.push_back({{"u", e.u}, {"v", e.v}, {"c", e.c}});
  }
  doc["edges"] = std::move(edges);
  return to_deterministic_json(doc);
}

}  // namespace lapnet
