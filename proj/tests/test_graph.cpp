#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "lapnet/graph.hpp"
#include "lapnet/graph_io.hpp"
#include "oracles.hpp"

using namespace lapnet;

namespace {

std::set<std::pair<Vertex, Vertex>> edge_set(const GraphSystem& g) {
  std::set<std::pair<Vertex, Vertex>> s;
  for (const auto& e : g.edges()) s.emplace(std::min(e.u, e.v), std::max(e.u, e.v));
  return s;
}

bool has_kind(const ValidationReport& r, ViolationKind k) {
  return std::any_of(r.violations.begin(), r.violations.end(),
                     [&](const Violation& v) { return v.kind == k; });
}

}  // namespace

TEST(Cyclic, TriangleEdges) {
  auto g = GraphSystem::cyclic(3);
  std::set<std::pair<Vertex, Vertex>> want{{0, 1}, {1, 2}, {0, 2}};
  EXPECT_EQ(edge_set(g), want);
  for (const auto& e : g.edges()) EXPECT_EQ(e.c, 1.0);
}

TEST(Cyclic, SquareHasDegreeTwo) {
  auto g = GraphSystem::cyclic(4);
  for (Vertex x = 0; x < 4; ++x) EXPECT_EQ(g.neighbors(x).size(), 2u);
}

TEST(Cyclic, FiveCycleStructure) {
  auto g = GraphSystem::cyclic(5);
  EXPECT_EQ(g.edges().size(), 5u);
  EXPECT_TRUE(is_connected(g, Window::whole(g)));
  for (const auto& e : g.edges()) EXPECT_NE(e.u, e.v);
}

TEST(Cyclic, RejectsShortCycles) {
  EXPECT_THROW(GraphSystem::cyclic(2), GraphError);
  EXPECT_THROW(GraphSystem::cyclic(0), GraphError);
}

TEST(Chain, LinearConductance) {
  auto g = GraphSystem::chain(WeightRule::linear, IndexSpace::half_line);
  EXPECT_EQ(*g.conductance(2, 3), 3.0);
  EXPECT_EQ(g.neighbors(0).size(), 1u);
  EXPECT_EQ(g.neighbors(0)[0].vertex, 1);
}

TEST(Chain, SquareConductance) {
  auto g = GraphSystem::chain(WeightRule::square, IndexSpace::half_line);
  EXPECT_EQ(*g.conductance(1, 2), 4.0);
}

TEST(Chain, ConstantFullLine) {
  auto g = GraphSystem::chain(WeightRule::constant, IndexSpace::full_line);
  EXPECT_EQ(*g.conductance(-1, 0), 1.0);
  EXPECT_FALSE(g.conductance(-1, 1).has_value());
}

TEST(Chain, GeometricNeedsLambdaAboveOne) {
  EXPECT_THROW(GraphSystem::chain(WeightRule::geometric, IndexSpace::half_line, 1.0), GraphError);
  EXPECT_THROW(GraphSystem::chain(WeightRule::geometric, IndexSpace::half_line, 0.5), GraphError);
  auto g = GraphSystem::chain(WeightRule::geometric, IndexSpace::half_line, 3.0);
  EXPECT_DOUBLE_EQ(*g.conductance(1, 2), 9.0);
}

TEST(Chain, HalfLineHasNoNegativeVertices) {
  auto g = GraphSystem::chain(WeightRule::constant, IndexSpace::half_line);
  EXPECT_FALSE(g.contains(-1));
  EXPECT_THROW(g.neighbors(-1), GraphError);
}

TEST(Lattice, OneDimensionalMatchesCycle) {
  for (int n = 3; n <= 12; ++n) {
    auto a = GraphSystem::lattice(1, n).edges();
    auto b = GraphSystem::cyclic(n).edges();
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].u, b[i].u);
      EXPECT_EQ(a[i].v, b[i].v);
      EXPECT_EQ(a[i].c, b[i].c);
    }
  }
}

TEST(Lattice, TwoByFourEdgeCountByEnumeration) {
  auto g = GraphSystem::lattice(2, 4);
  // brute force: connect every pair of coordinate tuples at wrapped distance 1
  std::set<std::pair<Vertex, Vertex>> expect;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) {
        for (int d = 0; d < 4; ++d) {
          int da = std::min((a - c + 4) % 4, (c - a + 4) % 4);
          int db = std::min((b - d + 4) % 4, (d - b + 4) % 4);
          if (da + db != 1) continue;
          std::vector<int> p{a, b}, q{c, d};
          Vertex x = g.vertex_at(p), y = g.vertex_at(q);
          expect.emplace(std::min(x, y), std::max(x, y));
        }
      }
    }
  }
  EXPECT_EQ(expect.size(), 32u);
  EXPECT_EQ(edge_set(g), expect);
  for (Vertex x = 0; x < 16; ++x) EXPECT_EQ(g.neighbors(x).size(), 4u);
}

TEST(Lattice, ThreeByFourDegreeSix) {
  auto g = GraphSystem::lattice(3, 4);
  for (Vertex x = 0; x < 64; ++x) EXPECT_EQ(g.neighbors(x).size(), 6u);
}

TEST(Lattice, CoordinatesRoundTrip) {
  auto g = GraphSystem::lattice(3, 5);
  for (Vertex x = 0; x < 125; ++x) EXPECT_EQ(g.vertex_at(g.coordinates(x)), x);
}

TEST(Lattice, RejectsBadArguments) {
  EXPECT_THROW(GraphSystem::lattice(0, 4), GraphError);
  EXPECT_THROW(GraphSystem::lattice(2, 2), GraphError);
}

TEST(Finite, RejectsAxiomViolations) {
  EXPECT_THROW(GraphSystem::finite(3, {{0, 0, 1.0}}), GraphError);
  EXPECT_THROW(GraphSystem::finite(3, {{0, 1, 0.0}}), GraphError);
  EXPECT_THROW(GraphSystem::finite(3, {{0, 1, -2.0}}), GraphError);
  EXPECT_THROW(GraphSystem::finite(3, {{0, 1, 1.0}, {1, 0, 2.0}}), GraphError);
  EXPECT_THROW(GraphSystem::finite(3, {{0, 5, 1.0}}), GraphError);
}

TEST(Validate, CycleIsClean) {
  auto r = validate(GraphSystem::cyclic(5));
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.components, 1u);
}

TEST(Validate, SelfLoopReported) {
  auto g = GraphSystem::finite_unchecked(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 3, 1.0}});
  auto r = validate(g);
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(has_kind(r, ViolationKind::self_loop));
}

TEST(Validate, TwoTrianglesDisconnected) {
  auto g = GraphSystem::finite(6, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}});
  auto r = validate(g);
  EXPECT_TRUE(has_kind(r, ViolationKind::disconnected));
  EXPECT_EQ(r.components, 2u);
}

TEST(Validate, NonPositiveAndDuplicateReported) {
  auto g = GraphSystem::finite_unchecked(3, {{0, 1, -1.0}, {1, 2, 1.0}, {2, 1, 1.0}});
  auto r = validate(g);
  EXPECT_TRUE(has_kind(r, ViolationKind::nonpositive_conductance));
  EXPECT_TRUE(has_kind(r, ViolationKind::duplicate_edge));
}

TEST(Validate, InfiniteGraphOnWindow) {
  auto g = GraphSystem::chain(WeightRule::square, IndexSpace::full_line);
  auto r = validate(g, Window::range(-30, 30));
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.vertices_checked, 61u);
}

TEST(Window, RangeAndLookup) {
  auto w = Window::range(-3, 3);
  EXPECT_EQ(w.size(), 7u);
  EXPECT_EQ(*w.index_of(0), 3u);
  EXPECT_FALSE(w.contains(4));
  EXPECT_TRUE(Window::range(-5, 5).contains(w));
  EXPECT_THROW(Window::range(2, 1), GraphError);
}

TEST(Window, BoundaryAndEdges) {
  auto g = GraphSystem::chain(WeightRule::constant, IndexSpace::full_line);
  auto w = Window::range(-2, 2);
  auto b = window_boundary(g, w);
  EXPECT_EQ(b, (std::vector<Vertex>{-2, 2}));
  EXPECT_EQ(window_edges(g, w).size(), 4u);
}

TEST(Window, LatticeBox) {
  auto g = GraphSystem::lattice(2, 6);
  std::vector<int> lo{1, 1}, hi{3, 2};
  auto w = Window::box(g, lo, hi);
  EXPECT_EQ(w.size(), 6u);
  EXPECT_TRUE(is_connected(g, w));
}

TEST(Io, RoundTrip) {
  auto g = oracle::random_finite_graph(10, 3);
  auto text = write_graph_json(g);
  auto h = read_graph_json(text);
  auto a = g.edges(), b = h.edges();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].u, b[i].u);
    EXPECT_EQ(a[i].v, b[i].v);
    EXPECT_EQ(a[i].c, b[i].c);
  }
  EXPECT_EQ(write_graph_json(h), text);
}

TEST(Io, WriterSortsEdges) {
  auto g = GraphSystem::finite(4, {{3, 2, 1.0}, {1, 0, 2.0}, {2, 0, 0.5}});
  auto text = write_graph_json(g);
  EXPECT_LT(text.find("\"c\": 2"), text.find("\"c\": 0.5"));
  EXPECT_LT(text.find("\"c\": 0.5"), text.find("\"c\": 1"));
}

TEST(Io, LineNumbersInErrors) {
  const char* text =
      "{\n"
      "  \"format\": \"lapnet-graph-v1\",\n"
      "  \"edges\": [\n"
      "    {\"u\": 0, \"v\": 1, \"c\": 1},\n"
      "    {\"u\": 1, \"v\": 1, \"c\": 1}\n"
      "  ]\n"
      "}\n";
  try {
    read_graph_json(text);
    FAIL() << "self-loop accepted";
  } catch (const GraphFormatError& e) {
    EXPECT_EQ(e.line(), 5u);
  }
  EXPECT_NO_THROW(read_graph_json(text, LoadMode::lenient));
}

TEST(Io, RejectsUnknownKeysAndFormats) {
  EXPECT_THROW(read_graph_json(R"({"format":"lapnet-graph-v2","edges":[]})"), GraphFormatError);
  EXPECT_THROW(read_graph_json(R"({"format":"lapnet-graph-v1","edges":[],"x":1})"), GraphFormatError);
  EXPECT_THROW(read_graph_json(R"({"format":"lapnet-graph-v1","edges":[{"u":0,"v":1,"c":1,"w":2}]})"),
               GraphFormatError);
  EXPECT_THROW(read_graph_json(R"({"format":"lapnet-graph-v1","edges":[{"u":0,"v":1,"c":1},{"u":1,"v":0,"c":1}]})"),
               GraphFormatError);
  EXPECT_THROW(read_graph_json("{not json"), GraphFormatError);
}

TEST(Io, LabelsSetVertexCount) {
  auto g = read_graph_json(R"({"format":"lapnet-graph-v1","labels":["a","b","c"],"edges":[{"u":0,"v":1,"c":1}]})");
  EXPECT_EQ(g.vertex_count(), 3u);
  EXPECT_EQ(g.label(2), "c");
}

// neighbours are finite, exclude x, and conductances are symmetric
TEST(GraphProperties, NeighbourhoodsAndSymmetry) {
  for (const auto& f : oracle::families()) {
    SCOPED_TRACE(f.name);
    for (Vertex x : f.w.vertices()) {
      for (const auto& nb : f.g.neighbors(x)) {
        EXPECT_NE(nb.vertex, x);
        EXPECT_GT(nb.conductance, 0.0);
        EXPECT_EQ(*f.g.conductance(nb.vertex, x), nb.conductance);
      }
    }
  }
}
