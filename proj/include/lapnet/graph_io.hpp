#pragma once

#include <string>
#include <string_view>

#include "lapnet/graph.hpp"

namespace lapnet {

inline constexpr std::string_view kGraphFormat = "lapnet-graph-v1";

/// Raised for unreadable graph files; the message carries a line number.
class GraphFormatError : public GraphError {
 public:
  GraphFormatError(const std::string& what, std::size_t line)
      : GraphError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class LoadMode {
  strict,   // loader enforces u != v, c > 0, no duplicate unordered pair
  lenient,  // records kept as-is for `validate`
};

/// Parses a lapnet-graph-v1 document. The vertex count is the label count
/// when labels are present, otherwise one more than the largest endpoint.
GraphSystem read_graph_json(std::string_view text, LoadMode mode = LoadMode::strict);
GraphSystem load_graph_file(const std::string& path, LoadMode mode = LoadMode::strict);

/// Serializes a finite graph; edges sorted by (min(u,v), max(u,v)).
std::string write_graph_json(const GraphSystem& g);

}  // namespace lapnet
