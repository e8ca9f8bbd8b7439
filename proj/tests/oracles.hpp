#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's assembly or solvers; graphs are only queried for neighbours.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "lapnet/field.hpp"
#include "lapnet/graph.hpp"

namespace oracle {

using lapnet::Complex;
using lapnet::GraphSystem;
using lapnet::Vertex;
using lapnet::VertexField;
using lapnet::Window;

struct Family {
  std::string name;
  GraphSystem g;
  Window w;
};

inline GraphSystem random_finite_graph(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> c(0.2, 3.0);
  std::vector<lapnet::Edge> edges;
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> parent(0, i - 1);
    edges.push_back({static_cast<Vertex>(parent(rng)), static_cast<Vertex>(i), c(rng)});
  }
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    auto a = pick(rng), b = pick(rng);
    if (a == b) continue;
    bool dup = false;
    for (const auto& e : edges) {
      if ((e.u == Vertex(a) && e.v == Vertex(b)) || (e.u == Vertex(b) && e.v == Vertex(a))) dup = true;
    }
    if (!dup) edges.push_back({static_cast<Vertex>(a), static_cast<Vertex>(b), c(rng)});
  }
  return GraphSystem::finite(n, edges);
}

// One small instance of every built-in family.
inline std::vector<Family> families() {
  using lapnet::IndexSpace;
  using lapnet::WeightRule;
  std::vector<Family> out;
  auto whole = [&](std::string name, GraphSystem g) {
    Window w = Window::whole(g);
    out.push_back({std::move(name), std::move(g), w});
  };
  whole("cyclic9", GraphSystem::cyclic(9));
  whole("lattice2x5", GraphSystem::lattice(2, 5));
  whole("lattice3x4", GraphSystem::lattice(3, 4));
  whole("finite_random", random_finite_graph(14, 7));
  out.push_back({"line_constant", GraphSystem::chain(WeightRule::constant, IndexSpace::full_line),
                 Window::range(-12, 12)});
  out.push_back({"line_linear", GraphSystem::chain(WeightRule::linear, IndexSpace::full_line),
                 Window::range(-8, 8)});
  out.push_back({"chain_linear", GraphSystem::chain(WeightRule::linear, IndexSpace::half_line),
                 Window::range(0, 20)});
  out.push_back({"chain_square", GraphSystem::chain(WeightRule::square, IndexSpace::half_line),
                 Window::range(0, 15)});
  out.push_back({"chain_geometric",
                 GraphSystem::chain(WeightRule::geometric, IndexSpace::half_line, 2.0),
                 Window::range(0, 12)});
  return out;
}

// Window vertices with no neighbour outside the window.
inline std::vector<Vertex> interior(const GraphSystem& g, const Window& w) {
  std::vector<Vertex> out;
  for (Vertex x : w.vertices()) {
    bool inside = true;
    for (const auto& nb : g.neighbors(x)) inside = inside && w.contains(nb.vertex);
    if (inside) out.push_back(x);
  }
  return out;
}

inline VertexField random_field(const Window& w, const std::vector<Vertex>& support,
                                std::mt19937& rng, bool complex_values = true,
                                std::size_t max_points = 5) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Complex> vals(w.size());
  std::uniform_int_distribution<std::size_t> pick(0, support.size() - 1);
  const std::size_t count = 1 + rng() % max_points;
  for (std::size_t k = 0; k < count; ++k) {
    const auto i = *w.index_of(support[pick(rng)]);
    vals[i] = {u(rng), complex_values ? u(rng) : 0.0};
  }
  return VertexField(w, vals);
}

// Σ_x Σ_{y~x} c(xy) |v(x) - v(y)|² with v read as zero outside the window,
// restricted to pairs with both ends in the window.
inline double brute_energy(const GraphSystem& g, const VertexField& v) {
  double e = 0.0;
  for (Vertex x : v.window().vertices()) {
    for (const auto& nb : g.neighbors(x)) {
      if (!v.window().contains(nb.vertex)) continue;
      e += nb.conductance * std::norm(v(x) - v(nb.vertex));
    }
  }
  return e;
}

// Δ of the zero extension, at a single vertex.
inline Complex brute_laplacian_at(const GraphSystem& g, const VertexField& v, Vertex x) {
  Complex s = 0.0;
  for (const auto& nb : g.neighbors(x)) s += nb.conductance * (v(x) - v(nb.vertex));
  return s;
}

using Dense = std::vector<std::vector<double>>;

// Induced-subgraph Laplacian built directly from neighbour lists.
inline Dense induced_laplacian(const GraphSystem& g, const Window& w) {
  const std::size_t n = w.size();
  Dense a(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& nb : g.neighbors(w[i])) {
      auto j = w.index_of(nb.vertex);
      if (!j) continue;
      a[i][i] += nb.conductance;
      a[i][*j] -= nb.conductance;
    }
  }
  return a;
}

// Gaussian elimination with partial pivoting.
inline std::vector<double> solve_dense(Dense a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
    }
    std::swap(a[k], a[p]);
    std::swap(b[k], b[p]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a[k][j] * x[j];
    x[k] = s / a[k][k];
  }
  return x;
}

// Dipole potential with v(alpha) = 0: row alpha is replaced by the pin.
inline std::vector<double> dipole_by_elimination(const GraphSystem& g, const Window& w,
                                                 Vertex alpha, Vertex beta) {
  Dense a = induced_laplacian(g, w);
  std::vector<double> b(w.size(), 0.0);
  const auto ia = *w.index_of(alpha);
  b[*w.index_of(beta)] = -1.0;
  std::fill(a[ia].begin(), a[ia].end(), 0.0);
  a[ia][ia] = 1.0;
  return solve_dense(a, b);
}

inline Dense matmul(const Dense& a, const Dense& b) {
  const std::size_t n = a.size();
  Dense c(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k] == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  }
  return c;
}

// e^{-tA} by scaling and squaring of a Taylor series.
inline Dense expm_neg(const Dense& a, double t) {
  const std::size_t n = a.size();
  double norm = 0.0;
  for (const auto& row : a) {
    double s = 0.0;
    for (double x : row) s += std::abs(x);
    norm = std::max(norm, s);
  }
  int squarings = 0;
  double scale = t;
  while (norm * scale > 0.25) {
    scale *= 0.5;
    ++squarings;
  }
  Dense m(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = -scale * a[i][j];
  }
  Dense result(n, std::vector<double>(n, 0.0));
  Dense term(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) result[i][i] = term[i][i] = 1.0;
  for (int k = 1; k <= 20; ++k) {
    term = matmul(term, m);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        term[i][j] /= k;
        result[i][j] += term[i][j];
      }
    }
  }
  for (int s = 0; s < squarings; ++s) result = matmul(result, result);
  return result;
}

inline std::vector<double> matvec(const Dense& a, const std::vector<double>& x) {
  std::vector<double> y(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  }
  return y;
}

// Compressed Laplacian (full weighted degree on the diagonal).
inline Dense compressed_laplacian(const GraphSystem& g, const Window& w) {
  const std::size_t n = w.size();
  Dense a(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& nb : g.neighbors(w[i])) {
      a[i][i] += nb.conductance;
      if (auto j = w.index_of(nb.vertex)) a[i][*j] -= nb.conductance;
    }
  }
  return a;
}

inline double dense_max_abs_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Max over i of |(a_i - a_0) - (b_i - b_0)|: equality modulo constants.
inline double max_diff_mod_constant(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs((a[i] - a[0]) - (b[i] - b[0])));
  return m;
}

}  // namespace oracle
