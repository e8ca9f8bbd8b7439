#include "lapnet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <sstream>
#include <utility>

namespace lapnet {

struct GraphSystem::FiniteData {
  std::size_t n = 0;
  std::vector<Edge> records;
  std::vector<std::vector<Neighbor>> adjacency;
  std::vector<std::string> labels;
};

std::string to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::finite_explicit: return "finite-explicit";
    case GraphKind::integer_line: return "integer-line";
    case GraphKind::half_line: return "half-line-chain";
    case GraphKind::cyclic: return "cyclic";
    case GraphKind::lattice: return "lattice";
  }
  return "unknown";
}

std::string to_string(WeightRule rule) {
  switch (rule) {
    case WeightRule::constant: return "constant";
    case WeightRule::linear: return "linear";
    case WeightRule::square: return "square";
    case WeightRule::geometric: return "geometric";
  }
  return "unknown";
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::self_loop: return "self-loop";
    case ViolationKind::asymmetric_conductance: return "asymmetric-conductance";
    case ViolationKind::nonpositive_conductance: return "nonpositive-conductance";
    case ViolationKind::duplicate_edge: return "duplicate-edge";
    case ViolationKind::disconnected: return "disconnected";
  }
  return "unknown";
}

namespace {

std::pair<Vertex, Vertex> ordered(Vertex a, Vertex b) { return {std::min(a, b), std::max(a, b)}; }

std::shared_ptr<GraphSystem::FiniteData> make_finite(std::size_t n, std::vector<Edge> edges,
                                                     std::vector<std::string> labels) {
  if (n == 0) throw GraphError("finite graph needs at least one vertex");
  if (!labels.empty() && labels.size() != n) {
    throw GraphError("label table has " + std::to_string(labels.size()) + " entries for " +
                     std::to_string(n) + " vertices");
  }
  auto data = std::make_shared<GraphSystem::FiniteData>();
  data->n = n;
  data->adjacency.resize(n);
  for (const auto& e : edges) {
    if (e.u < 0 || e.v < 0 || static_cast<std::size_t>(e.u) >= n ||
        static_cast<std::size_t>(e.v) >= n) {
      throw GraphError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                       ") references a vertex outside 0.." + std::to_string(n - 1));
    }
    data->adjacency[e.u].push_back({e.v, e.c});
    if (e.u != e.v) data->adjacency[e.v].push_back({e.u, e.c});
  }
  for (auto& row : data->adjacency) {
    std::stable_sort(row.begin(), row.end(),
                     [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
  }
  data->records = std::move(edges);
  data->labels = std::move(labels);
  return data;
}

}  // namespace

GraphSystem GraphSystem::finite(std::size_t n, std::vector<Edge> edges,
                                std::vector<std::string> labels) {
  std::map<std::pair<Vertex, Vertex>, std::size_t> seen;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    if (e.u == e.v) throw GraphError("self-loop at vertex " + std::to_string(e.u));
    if (!(e.c > 0.0) || !std::isfinite(e.c)) {
      throw GraphError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                       ") has non-positive conductance");
    }
    auto [it, inserted] = seen.emplace(ordered(e.u, e.v), i);
    if (!inserted) {
      throw GraphError("duplicate edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                       ")");
    }
  }
  GraphSystem g;
  g.kind_ = GraphKind::finite_explicit;
  g.finite_ = make_finite(n, std::move(edges), std::move(labels));
  return g;
}

GraphSystem GraphSystem::finite_unchecked(std::size_t n, std::vector<Edge> edges,
                                          std::vector<std::string> labels) {
  GraphSystem g;
  g.kind_ = GraphKind::finite_explicit;
  g.finite_ = make_finite(n, std::move(edges), std::move(labels));
  return g;
}

GraphSystem GraphSystem::cyclic(int n) {
  if (n < 3) throw GraphError("cyclic graph needs N >= 3, got " + std::to_string(n));
  GraphSystem g;
  g.kind_ = GraphKind::cyclic;
  g.extent_ = n;
  g.dim_ = 1;
  return g;
}

GraphSystem GraphSystem::chain(WeightRule rule, IndexSpace space, double lambda) {
  if (rule == WeightRule::geometric && !(lambda > 1.0)) {
    throw GraphError("geometric chain needs lambda > 1");
  }
  GraphSystem g;
  g.kind_ = space == IndexSpace::half_line ? GraphKind::half_line : GraphKind::integer_line;
  g.rule_ = rule;
  g.space_ = space;
  g.lambda_ = rule == WeightRule::geometric ? lambda : 1.0;
  return g;
}

GraphSystem GraphSystem::lattice(int dim, int extent) {
  if (dim < 1) throw GraphError("lattice dimension must be >= 1");
  if (extent < 3) throw GraphError("lattice extent must be >= 3");
  double count = std::pow(static_cast<double>(extent), dim);
  if (count > 1e8) throw GraphError("lattice too large");
  GraphSystem g;
  g.kind_ = GraphKind::lattice;
  g.dim_ = dim;
  g.extent_ = extent;
  return g;
}

bool GraphSystem::is_finite() const {
  return kind_ == GraphKind::finite_explicit || kind_ == GraphKind::cyclic ||
         kind_ == GraphKind::lattice;
}

std::size_t GraphSystem::vertex_count() const {
  switch (kind_) {
    case GraphKind::finite_explicit: return finite_->n;
    case GraphKind::cyclic: return static_cast<std::size_t>(extent_);
    case GraphKind::lattice: {
      std::size_t n = 1;
      for (int a = 0; a < dim_; ++a) n *= static_cast<std::size_t>(extent_);
      return n;
    }
    default: throw GraphError(to_string(kind_) + " graph has infinitely many vertices");
  }
}

bool GraphSystem::contains(Vertex x) const {
  switch (kind_) {
    case GraphKind::integer_line: return true;
    case GraphKind::half_line: return x >= 0;
    default: return x >= 0 && static_cast<std::size_t>(x) < vertex_count();
  }
}

void GraphSystem::require_vertex(Vertex x) const {
  if (!contains(x)) {
    throw GraphError("vertex " + std::to_string(x) + " is not in the " + to_string(kind_) +
                     " graph");
  }
}

double GraphSystem::chain_conductance(Vertex n) const {
  // On the integer line, edge (n, n+1) with n < 0 mirrors edge (-n-1, -n).
  if (n < 0) n = -n - 1;
  const double k = static_cast<double>(n) + 1.0;
  switch (rule_) {
    case WeightRule::constant: return 1.0;
    case WeightRule::linear: return k;
    case WeightRule::square: return k * k;
    case WeightRule::geometric: return std::pow(lambda_, k);
  }
  return 1.0;
}

std::vector<Neighbor> GraphSystem::neighbors(Vertex x) const {
  require_vertex(x);
  std::vector<Neighbor> out;
  switch (kind_) {
    case GraphKind::finite_explicit:
      out = finite_->adjacency[static_cast<std::size_t>(x)];
      break;
    case GraphKind::integer_line:
      out.push_back({x - 1, chain_conductance(x - 1)});
      out.push_back({x + 1, chain_conductance(x)});
      break;
    case GraphKind::half_line:
      if (x > 0) out.push_back({x - 1, chain_conductance(x - 1)});
      out.push_back({x + 1, chain_conductance(x)});
      break;
    case GraphKind::cyclic: {
      const Vertex n = extent_;
      Vertex a = (x + n - 1) % n;
      Vertex b = (x + 1) % n;
      out.push_back({std::min(a, b), 1.0});
      out.push_back({std::max(a, b), 1.0});
      break;
    }
    case GraphKind::lattice: {
      Vertex stride = 1;
      const Vertex n = extent_;
      for (int a = 0; a < dim_; ++a) {
        Vertex coord = (x / stride) % n;
        Vertex base = x - coord * stride;
        out.push_back({base + ((coord + n - 1) % n) * stride, 1.0});
        out.push_back({base + ((coord + 1) % n) * stride, 1.0});
        stride *= n;
      }
      std::sort(out.begin(), out.end(),
                [](const Neighbor& p, const Neighbor& q) { return p.vertex < q.vertex; });
      break;
    }
  }
  return out;
}

std::optional<double> GraphSystem::conductance(Vertex x, Vertex y) const {
  if (!contains(x) || !contains(y)) return std::nullopt;
  for (const auto& nb : neighbors(x)) {
    if (nb.vertex == y) return nb.conductance;
  }
  return std::nullopt;
}

std::vector<Edge> GraphSystem::edges() const {
  if (!is_finite()) throw GraphError("edge list requested for an infinite graph");
  std::vector<Edge> out;
  if (kind_ == GraphKind::finite_explicit) {
    for (const auto& e : finite_->records) {
      auto [a, b] = ordered(e.u, e.v);
      out.push_back({a, b, e.c});
    }
  } else {
    const auto n = static_cast<Vertex>(vertex_count());
    for (Vertex x = 0; x < n; ++x) {
      for (const auto& nb : neighbors(x)) {
        if (nb.vertex > x) out.push_back({x, nb.vertex, nb.conductance});
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  return out;
}

std::string GraphSystem::label(Vertex x) const {
  if (kind_ == GraphKind::finite_explicit && !finite_->labels.empty() && contains(x)) {
    return finite_->labels[static_cast<std::size_t>(x)];
  }
  return std::to_string(x);
}

const std::vector<std::string>& GraphSystem::labels() const {
  static const std::vector<std::string> empty;
  return kind_ == GraphKind::finite_explicit ? finite_->labels : empty;
}

std::vector<int> GraphSystem::coordinates(Vertex x) const {
  require_vertex(x);
  if (kind_ != GraphKind::lattice) return {static_cast<int>(x)};
  std::vector<int> c(static_cast<std::size_t>(dim_));
  for (int a = 0; a < dim_; ++a) {
    c[static_cast<std::size_t>(a)] = static_cast<int>(x % extent_);
    x /= extent_;
  }
  return c;
}

Vertex GraphSystem::vertex_at(std::span<const int> coords) const {
  if (kind_ != GraphKind::lattice) {
    if (coords.size() != 1) throw GraphError("expected one coordinate");
    return coords[0];
  }
  if (coords.size() != static_cast<std::size_t>(dim_)) {
    throw GraphError("expected " + std::to_string(dim_) + " lattice coordinates");
  }
  Vertex x = 0;
  Vertex stride = 1;
  for (int a = 0; a < dim_; ++a) {
    int c = ((coords[static_cast<std::size_t>(a)] % extent_) + extent_) % extent_;
    x += c * stride;
    stride *= extent_;
  }
  return x;
}

// ---------------------------------------------------------------------------

Window Window::range(Vertex lo, Vertex hi) {
  if (hi < lo) throw GraphError("empty window " + std::to_string(lo) + ":" + std::to_string(hi));
  Window w;
  w.vertices_.resize(static_cast<std::size_t>(hi - lo + 1));
  for (std::size_t i = 0; i < w.vertices_.size(); ++i) w.vertices_[i] = lo + static_cast<Vertex>(i);
  w.range_ = true;
  return w;
}

Window Window::of(std::vector<Vertex> vertices) {
  if (vertices.empty()) throw GraphError("empty window");
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  if (vertices.back() - vertices.front() + 1 == static_cast<Vertex>(vertices.size())) {
    return range(vertices.front(), vertices.back());
  }
  Window w;
  auto index = std::make_shared<std::unordered_map<Vertex, std::size_t>>();
  index->reserve(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) index->emplace(vertices[i], i);
  w.vertices_ = std::move(vertices);
  w.index_ = std::move(index);
  return w;
}

Window Window::whole(const GraphSystem& g) {
  if (!g.is_finite()) throw GraphError("an infinite graph needs an explicit window");
  return range(0, static_cast<Vertex>(g.vertex_count()) - 1);
}

Window Window::box(const GraphSystem& lattice, std::span<const int> lo, std::span<const int> hi) {
  if (lattice.kind() != GraphKind::lattice) throw GraphError("box windows need a lattice");
  const auto d = static_cast<std::size_t>(lattice.dim());
  if (lo.size() != d || hi.size() != d) throw GraphError("box extents do not match dimension");
  for (std::size_t a = 0; a < d; ++a) {
    if (lo[a] < 0 || hi[a] >= lattice.extent() || hi[a] < lo[a]) {
      throw GraphError("box extent out of lattice range");
    }
  }
  std::vector<Vertex> out;
  std::vector<int> c(lo.begin(), lo.end());
  while (true) {
    out.push_back(lattice.vertex_at(c));
    std::size_t a = 0;
    while (a < d) {
      if (++c[a] <= hi[a]) break;
      c[a] = lo[a];
      ++a;
    }
    if (a == d) break;
  }
  return of(std::move(out));
}

std::optional<std::size_t> Window::index_of(Vertex x) const {
  if (range_) {
    if (x < vertices_.front() || x > vertices_.back()) return std::nullopt;
    return static_cast<std::size_t>(x - vertices_.front());
  }
  auto it = index_->find(x);
  if (it == index_->end()) return std::nullopt;
  return it->second;
}

bool Window::contains(const Window& other) const {
  for (Vertex x : other.vertices_) {
    if (!contains(x)) return false;
  }
  return true;
}

std::string Window::describe() const {
  std::ostringstream os;
  if (range_) {
    os << lo() << ":" << hi();
  } else {
    os << "set(" << size() << ")";
  }
  return os.str();
}

void require_window(const GraphSystem& g, const Window& w) {
  for (Vertex x : w.vertices()) {
    if (!g.contains(x)) {
      throw GraphError("window vertex " + std::to_string(x) + " is not in the graph");
    }
  }
}

std::vector<Edge> window_edges(const GraphSystem& g, const Window& w) {
  std::vector<Edge> out;
  for (Vertex x : w.vertices()) {
    for (const auto& nb : g.neighbors(x)) {
      if (nb.vertex > x && w.contains(nb.vertex)) out.push_back({x, nb.vertex, nb.conductance});
    }
  }
  return out;
}

std::vector<Vertex> window_boundary(const GraphSystem& g, const Window& w) {
  std::vector<Vertex> out;
  for (Vertex x : w.vertices()) {
    for (const auto& nb : g.neighbors(x)) {
      if (!w.contains(nb.vertex)) {
        out.push_back(x);
        break;
      }
    }
  }
  return out;
}

namespace {

std::size_t count_components(const GraphSystem& g, const Window& w) {
  std::vector<char> seen(w.size(), 0);
  std::size_t components = 0;
  for (std::size_t start = 0; start < w.size(); ++start) {
    if (seen[start]) continue;
    ++components;
    std::queue<std::size_t> todo;
    todo.push(start);
    seen[start] = 1;
    while (!todo.empty()) {
      std::size_t i = todo.front();
      todo.pop();
      for (const auto& nb : g.neighbors(w[i])) {
        auto j = w.index_of(nb.vertex);
        if (j && !seen[*j]) {
          seen[*j] = 1;
          todo.push(*j);
        }
      }
    }
  }
  return components;
}

}  // namespace

bool is_connected(const GraphSystem& g, const Window& w) { return count_components(g, w) == 1; }

ValidationReport validate(const GraphSystem& g, const std::optional<Window>& w) {
  ValidationReport report;
  const Window win = w ? *w : Window::whole(g);
  report.vertices_checked = win.size();

  auto add = [&](ViolationKind kind, std::string detail) {
    report.violations.push_back({kind, std::move(detail)});
  };
  auto pair_name = [](Vertex a, Vertex b) {
    return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
  };

  if (g.kind() == GraphKind::finite_explicit) {
    std::map<std::pair<Vertex, Vertex>, double> first;
    for (const auto& e : g.edges()) {
      if (e.u == e.v) add(ViolationKind::self_loop, "edge " + pair_name(e.u, e.v));
      if (!(e.c > 0.0)) {
        add(ViolationKind::nonpositive_conductance, "edge " + pair_name(e.u, e.v));
      }
      auto [it, inserted] = first.emplace(std::pair(e.u, e.v), e.c);
      if (!inserted) {
        add(ViolationKind::duplicate_edge, "edge " + pair_name(e.u, e.v));
        if (it->second != e.c) {
          add(ViolationKind::asymmetric_conductance, "edge " + pair_name(e.u, e.v) +
                                                         " recorded with different conductances");
        }
      }
    }
  } else {
    for (Vertex x : win.vertices()) {
      for (const auto& nb : g.neighbors(x)) {
        if (nb.vertex == x) add(ViolationKind::self_loop, "vertex " + std::to_string(x));
        if (!(nb.conductance > 0.0)) {
          add(ViolationKind::nonpositive_conductance, "edge " + pair_name(x, nb.vertex));
        }
        auto back = g.conductance(nb.vertex, x);
        if (!back || *back != nb.conductance) {
          add(ViolationKind::asymmetric_conductance, "edge " + pair_name(x, nb.vertex));
        }
      }
    }
  }

  report.components = count_components(g, win);
  if (report.components > 1 && g.kind() == GraphKind::finite_explicit) {
    add(ViolationKind::disconnected,
        std::to_string(report.components) + " connected components");
  }
  return report;
}

}  // namespace lapnet
