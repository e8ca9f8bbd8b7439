#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace lapnet {

using Vertex = std::int64_t;

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class GraphKind { finite_explicit, integer_line, half_line, cyclic, lattice };

// Conductance rules for nearest-neighbour chains, c(n, n+1):
//   constant 1, linear n+1, square (n+1)^2, geometric lambda^(n+1).
enum class WeightRule { constant, linear, square, geometric };

enum class IndexSpace { half_line, full_line };

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  double c = 1.0;
};

struct Neighbor {
  Vertex vertex = 0;
  double conductance = 0.0;
};

std::string to_string(GraphKind kind);
std::string to_string(WeightRule rule);

/// A graph with symmetric positive conductances.
///
/// Finite graphs (explicit edge lists, cycles, periodic lattices) are stored
/// or computed directly; the integer line and half-line chains are generators
/// whose neighbourhoods are computed on demand, so any finite window of them
/// can be materialized. Values are immutable after construction.
class GraphSystem {
 public:
  /// Explicit finite graph on vertices 0..n-1. Rejects self-loops,
  /// non-positive conductances, out-of-range endpoints and duplicate
  /// unordered pairs.
  static GraphSystem finite(std::size_t n, std::vector<Edge> edges,
                            std::vector<std::string> labels = {});

  /// Stores the records as given so that `validate` can report on them.
  /// Endpoints must still lie in 0..n-1.
  static GraphSystem finite_unchecked(std::size_t n, std::vector<Edge> edges,
                                      std::vector<std::string> labels = {});

  static GraphSystem cyclic(int n);
  static GraphSystem chain(WeightRule rule, IndexSpace space, double lambda = 2.0);
  static GraphSystem lattice(int dim, int extent);

  GraphKind kind() const { return kind_; }
  bool is_finite() const;
  std::size_t vertex_count() const;
  bool contains(Vertex x) const;

  std::vector<Neighbor> neighbors(Vertex x) const;
  std::optional<double> conductance(Vertex x, Vertex y) const;

  /// Edge list sorted by (min(u,v), max(u,v)); finite graphs only.
  std::vector<Edge> edges() const;

  std::string label(Vertex x) const;
  const std::vector<std::string>& labels() const;

  WeightRule weight_rule() const { return rule_; }
  IndexSpace index_space() const { return space_; }
  double lambda() const { return lambda_; }
  int dim() const { return dim_; }
  int extent() const { return extent_; }

  std::vector<int> coordinates(Vertex x) const;
  Vertex vertex_at(std::span<const int> coords) const;

  /// c(n, n+1) for chains.
  double chain_conductance(Vertex n) const;

 struct FiniteData;

 private:
  GraphSystem() = default;
  void require_vertex(Vertex x) const;

  GraphKind kind_ = GraphKind::finite_explicit;
  WeightRule rule_ = WeightRule::constant;
  IndexSpace space_ = IndexSpace::full_line;
  double lambda_ = 1.0;
  int dim_ = 1;
  int extent_ = 0;
  std::shared_ptr<const FiniteData> finite_;
};

/// A finite set of vertices of a graph, in ascending order.
class Window {
 public:
  static Window range(Vertex lo, Vertex hi);
  static Window of(std::vector<Vertex> vertices);
  static Window whole(const GraphSystem& g);
  /// Per-axis inclusive box of a lattice (no wraparound).
  static Window box(const GraphSystem& lattice, std::span<const int> lo, std::span<const int> hi);

  std::size_t size() const { return vertices_.size(); }
  Vertex operator[](std::size_t i) const { return vertices_[i]; }
  std::span<const Vertex> vertices() const { return vertices_; }
  bool is_range() const { return range_; }
  Vertex lo() const { return vertices_.front(); }
  Vertex hi() const { return vertices_.back(); }

  std::optional<std::size_t> index_of(Vertex x) const;
  bool contains(Vertex x) const { return index_of(x).has_value(); }
  bool contains(const Window& other) const;

  std::string describe() const;

  friend bool operator==(const Window& a, const Window& b) { return a.vertices_ == b.vertices_; }

 private:
  Window() = default;

  std::vector<Vertex> vertices_;
  bool range_ = false;
  std::shared_ptr<const std::unordered_map<Vertex, std::size_t>> index_;
};

/// Throws GraphError unless every window vertex belongs to g.
void require_window(const GraphSystem& g, const Window& w);

/// Edges with both endpoints in w, each once, as (min, max).
std::vector<Edge> window_edges(const GraphSystem& g, const Window& w);

/// Window vertices having at least one neighbour outside w.
std::vector<Vertex> window_boundary(const GraphSystem& g, const Window& w);

/// Whether the subgraph induced on w is connected.
bool is_connected(const GraphSystem& g, const Window& w);

enum class ViolationKind { self_loop, asymmetric_conductance, nonpositive_conductance,
                           duplicate_edge, disconnected };

std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::size_t vertices_checked = 0;
  std::size_t components = 0;

  bool ok() const { return violations.empty(); }
};

/// Checks the graph axioms on the materialized vertex set (the whole graph
/// when finite, otherwise `w`). Violations are reported, never thrown.
ValidationReport validate(const GraphSystem& g, const std::optional<Window>& w = std::nullopt);

}  // namespace lapnet
