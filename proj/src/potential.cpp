#include "lapnet/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

#include "lapnet/laplacian.hpp"

namespace lapnet {

std::string to_string(Solver s) {
  switch (s) {
    case Solver::cg: return "cg";
    case Solver::dft: return "dft";
    case Solver::closed_form: return "closed-form";
  }
  return "?";
}

Solver parse_solver(const std::string& s) {
  if (s == "cg") return Solver::cg;
  if (s == "dft") return Solver::dft;
  if (s == "closed-form" || s == "closed_form") return Solver::closed_form;
  throw std::invalid_argument("unknown solver \"" + s + "\" (cg, dft, closed-form)");
}

namespace {

std::vector<double> solve_cg(const GraphSystem& g, const Window& w, std::size_t ia, std::size_t ib,
                             const SolverOptions& opt, std::size_t& iterations) {
  const auto a = assemble_matrix(g, w, Boundary::induced);
  const CsrMatrix& m = a.csr();
  const std::size_t n = w.size();
  const Exec ex = opt.exec;
  const std::size_t max_it = opt.max_iterations ? opt.max_iterations : 20 * n;

  std::vector<double> x(n, 0.0), r(n, 0.0), p(n), ap(n);
  r[ia] = 1.0;
  r[ib] = -1.0;
  auto project = [&](std::vector<double>& z) {
    const double mean = kernels::sum(ex, z) / static_cast<double>(n);
    for (double& e : z) e -= mean;
  };
  project(r);
  p = r;
  double rr = kernels::dot(ex, r, r);
  const double bnorm = std::sqrt(rr);
  iterations = 0;
  bool converged = false;
  while (iterations < max_it) {
    kernels::spmv(ex, m, p, ap);
    const double pap = kernels::dot(ex, p, ap);
    if (!(pap > 0.0)) break;
    const double step = rr / pap;
    kernels::axpy(ex, step, p, x);
    kernels::axpy(ex, -step, ap, r);
    project(r);
    ++iterations;
    const double rr_new = kernels::dot(ex, r, r);
    if (std::sqrt(rr_new) <= opt.relative_tolerance * bnorm) {
      converged = true;
      break;
    }
    kernels::xpay(ex, r, rr_new / rr, p);
    rr = rr_new;
  }
  if (!converged) {
    throw ConvergenceError("cg did not converge in " + std::to_string(iterations) + " iterations",
                           std::sqrt(rr) / bnorm, iterations);
  }
  return x;
}

std::vector<double> solve_dft(const GraphSystem& g, const Window& w, Vertex alpha, Vertex beta,
                              Exec ex) {
  if (g.kind() != GraphKind::cyclic && g.kind() != GraphKind::lattice) {
    throw std::invalid_argument("dft solver needs a cyclic graph or periodic lattice");
  }
  if (!(w == Window::whole(g))) {
    throw std::invalid_argument("dft solver needs the whole periodic graph as window");
  }
  const std::size_t n = static_cast<std::size_t>(g.extent());
  const std::size_t dims = static_cast<std::size_t>(g.dim());
  const std::size_t total = w.size();
  std::vector<std::complex<double>> data(total);
  data[static_cast<std::size_t>(alpha)] += 1.0;
  data[static_cast<std::size_t>(beta)] -= 1.0;
  for (std::size_t axis = 0; axis < dims; ++axis) kernels::dft_axis(ex, data, n, axis, false);

  std::vector<double> s1(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = std::sin(std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    s1[k] = 4.0 * t * t;
  }
  for (std::size_t idx = 0; idx < total; ++idx) {
    double lambda = 0.0;
    std::size_t rest = idx;
    for (std::size_t axis = 0; axis < dims; ++axis) {
      lambda += s1[rest % n];
      rest /= n;
    }
    data[idx] = idx == 0 ? std::complex<double>{} : data[idx] / lambda;
  }
  for (std::size_t axis = 0; axis < dims; ++axis) kernels::dft_axis(ex, data, n, axis, true);
  std::vector<double> out(total);
  for (std::size_t i = 0; i < total; ++i) out[i] = data[i].real();
  return out;
}

std::vector<double> closed_form_values(const GraphSystem& g, const Window& w, Vertex alpha,
                                       Vertex beta) {
  std::vector<double> out(w.size());
  if (g.kind() == GraphKind::integer_line && g.weight_rule() == WeightRule::constant) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      const Vertex x = w[i];
      double v = 0.0;
      if (alpha < beta) {
        if (x > beta) v = -static_cast<double>(beta - alpha);
        else if (x > alpha) v = -static_cast<double>(x - alpha);
      } else {
        if (x < beta) v = -static_cast<double>(alpha - beta);
        else if (x < alpha) v = -static_cast<double>(alpha - x);
      }
      out[i] = v;
    }
    return out;
  }
  if (g.kind() == GraphKind::cyclic) {
    if (!(w == Window::whole(g))) throw std::invalid_argument("cyclic closed form needs the whole cycle");
    const Vertex n = g.extent();
    const Vertex l1 = ((beta - alpha) % n + n) % n;
    const Vertex l2 = n - l1;
    const double nn = static_cast<double>(n);
    for (std::size_t i = 0; i < w.size(); ++i) {
      const Vertex j = ((w[i] - alpha) % n + n) % n;
      out[i] = j <= l1 ? -static_cast<double>(l2 * j) / nn : -static_cast<double>(l1 * (n - j)) / nn;
    }
    return out;
  }
  throw std::invalid_argument("closed form exists only for the c = 1 integer line and cyclic graphs");
}

}  // namespace

PotentialSolution solve_dipole(const GraphSystem& g, const Window& w, Vertex alpha, Vertex beta,
                               Solver solver, const SolverOptions& options) {
  require_window(g, w);
  if (alpha == beta) throw std::invalid_argument("dipole needs alpha != beta");
  auto ia = w.index_of(alpha);
  auto ib = w.index_of(beta);
  if (!ia || !ib) throw std::invalid_argument("alpha and beta must lie in the window");
  if (!is_connected(g, w)) throw NoSolutionError("window " + w.describe() + " is not connected");

  PotentialSolution sol{VertexField(w)};
  std::vector<double> x;
  switch (solver) {
    case Solver::cg: x = solve_cg(g, w, *ia, *ib, options, sol.iterations); break;
    case Solver::dft: x = solve_dft(g, w, alpha, beta, options.exec); break;
    case Solver::closed_form: x = closed_form_values(g, w, alpha, beta); break;
  }
  const double pin = x[*ia];
  for (double& e : x) e -= pin;

  sol.field = VertexField::real(w, x);
  sol.alpha = alpha;
  sol.beta = beta;
  sol.solver = solver;
  sol.grounding = alpha;
  sol.energy = energy(g, sol.field);

  auto lap = apply_laplacian(g, sol.field, Boundary::induced).field;
  double res = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    double target = (i == *ia ? 1.0 : 0.0) - (i == *ib ? 1.0 : 0.0);
    res += std::norm(lap.at_index(i) - target);
  }
  sol.residual_norm = std::sqrt(res);
  if (sol.residual_norm > 1e-9 * std::sqrt(static_cast<double>(w.size()))) {
    throw ConvergenceError(to_string(solver) + " solution residual " +
                               std::to_string(sol.residual_norm) + " above tolerance",
                           sol.residual_norm, sol.iterations);
  }
  return sol;
}

PotentialSolution reference_dipole_line(int k, const Window& w) {
  if (k < 1) throw std::invalid_argument("reference dipole needs k >= 1");
  return solve_dipole(GraphSystem::chain(WeightRule::constant, IndexSpace::full_line), w, 0, k,
                      Solver::closed_form);
}

PotentialSolution reference_dipole_cyclic(int n) {
  auto g = GraphSystem::cyclic(n);
  return solve_dipole(g, Window::whole(g), 0, 1, Solver::closed_form);
}

VertexField mean_zero(const VertexField& v) {
  Complex mean{};
  for (Complex z : v.values()) mean += z;
  mean /= static_cast<double>(v.size());
  std::vector<Complex> out(v.values().begin(), v.values().end());
  for (Complex& z : out) z -= mean;
  return VertexField(v.window(), std::move(out));
}

ResistanceMetric::ResistanceMetric(const GraphSystem& g, Window w, std::optional<Vertex> base,
                                   SolverOptions options)
    : graph_(g), window_(std::move(w)), base_(base.value_or(window_[0])), options_(options) {
  require_window(graph_, window_);
  if (!window_.contains(base_)) throw std::invalid_argument("base vertex outside the window");
  if (!is_connected(graph_, window_)) {
    throw NoSolutionError("window " + window_.describe() + " is not connected");
  }
}

const VertexField& ResistanceMetric::potential(Vertex z) {
  auto it = cache_.find(z);
  if (it != cache_.end()) return it->second;
  if (!window_.contains(z)) throw std::invalid_argument("vertex outside the window");
  VertexField f = z == base_ ? VertexField(window_)
                             : solve_dipole(graph_, window_, base_, z, Solver::cg, options_).field;
  return cache_.emplace(z, std::move(f)).first->second;
}

double ResistanceMetric::closed_form(Vertex x, Vertex y) {
  if (x == y) return 0.0;
  const VertexField& vx = potential(x);
  const VertexField& vy = potential(y);
  const double inner = (vx(y) + vy(x) - vx(x) - vy(y)).real();
  return std::sqrt(2.0) * std::sqrt(std::max(inner, 0.0));
}

double ResistanceMetric::distance(Vertex x, Vertex y) {
  if (x == y) {
    if (!window_.contains(x)) throw std::invalid_argument("vertex outside the window");
    return 0.0;
  }
  const double d = std::sqrt(energy(graph_, potential(x) - potential(y)));
  const double c = closed_form(x, y);
  if (std::abs(d - c) > 1e-8 * std::max(1.0, d)) {
    throw std::logic_error("resistance closed form disagrees with the energy definition");
  }
  return d;
}

double resistance_distance(const GraphSystem& g, const Window& w, Vertex x, Vertex y) {
  ResistanceMetric metric(g, w);
  return metric.distance(x, y);
}

double path_resistance_bound(const GraphSystem& g, const Window& w, Vertex alpha, Vertex beta) {
  require_window(g, w);
  auto ia = w.index_of(alpha);
  auto ib = w.index_of(beta);
  if (!ia || !ib) throw std::invalid_argument("alpha and beta must lie in the window");
  std::vector<double> dist(w.size(), INFINITY);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[*ia] = 0.0;
  heap.emplace(0.0, *ia);
  while (!heap.empty()) {
    auto [d, i] = heap.top();
    heap.pop();
    if (d > dist[i]) continue;
    if (i == *ib) break;
    for (const auto& nb : g.neighbors(w[i])) {
      auto j = w.index_of(nb.vertex);
      if (!j) continue;
      const double nd = d + 1.0 / nb.conductance;
      if (nd < dist[*j]) {
        dist[*j] = nd;
        heap.emplace(nd, *j);
      }
    }
  }
  if (!std::isfinite(dist[*ib])) {
    throw NoSolutionError("vertex " + std::to_string(beta) + " is unreachable from " +
                          std::to_string(alpha));
  }
  return 2.0 * dist[*ib];
}

void CurrentFunction::set(Vertex x, Vertex y, double current) {
  if (x == y) throw std::invalid_argument("current on a self-loop");
  if (x < y) values_[{x, y}] = current;
  else values_[{y, x}] = -current;
}

double CurrentFunction::operator()(Vertex x, Vertex y) const {
  auto it = values_.find({std::min(x, y), std::max(x, y)});
  if (it == values_.end()) return 0.0;
  return x < y ? it->second : -it->second;
}

CurrentFunction currents_from_field(const GraphSystem& g, const VertexField& v) {
  CurrentFunction I;
  for (const auto& e : window_edges(g, v.window())) {
    I.set(e.u, e.v, e.c * (v(e.u) - v(e.v)).real());
  }
  return I;
}

CurrentFunction currents_from_potential(const GraphSystem& g, const PotentialSolution& sol) {
  return currents_from_field(g, sol.field);
}

namespace {

struct SpanningForest {
  std::vector<std::optional<std::size_t>> parent;
  std::vector<double> drop;  // Σ I/c along the tree path from the root
  std::vector<std::size_t> order;
};

SpanningForest bfs_forest(const GraphSystem& g, const Window& w, const CurrentFunction& I,
                          std::size_t root) {
  SpanningForest f;
  f.parent.assign(w.size(), std::nullopt);
  f.drop.assign(w.size(), 0.0);
  std::vector<char> seen(w.size(), 0);
  auto grow = [&](std::size_t start) {
    std::queue<std::size_t> todo;
    todo.push(start);
    seen[start] = 1;
    while (!todo.empty()) {
      std::size_t i = todo.front();
      todo.pop();
      f.order.push_back(i);
      for (const auto& nb : g.neighbors(w[i])) {
        auto j = w.index_of(nb.vertex);
        if (!j || seen[*j]) continue;
        seen[*j] = 1;
        f.parent[*j] = i;
        f.drop[*j] = f.drop[i] + I(w[i], nb.vertex) / nb.conductance;
        todo.push(*j);
      }
    }
  };
  grow(root);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!seen[i]) grow(i);
  }
  return f;
}

}  // namespace

KirchhoffReport verify_kirchhoff(const GraphSystem& g, const Window& w, const CurrentFunction& I,
                                 std::optional<std::pair<Vertex, Vertex>> dipole) {
  require_window(g, w);
  KirchhoffReport rep;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Vertex x = w[i];
    double div = 0.0;
    for (const auto& nb : g.neighbors(x)) {
      if (w.contains(nb.vertex)) div += I(x, nb.vertex);
    }
    double source = 0.0;
    if (dipole) source = (x == dipole->first ? 1.0 : 0.0) - (x == dipole->second ? 1.0 : 0.0);
    rep.node_law_max_violation = std::max(rep.node_law_max_violation, std::abs(div - source));
  }
  auto forest = bfs_forest(g, w, I, 0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (const auto& nb : g.neighbors(w[i])) {
      auto j = w.index_of(nb.vertex);
      if (!j || nb.vertex <= w[i]) continue;
      if (forest.parent[*j] == i || forest.parent[i] == *j) continue;
      const double loop = forest.drop[i] - forest.drop[*j] + I(w[i], nb.vertex) / nb.conductance;
      rep.loop_law_max_violation = std::max(rep.loop_law_max_violation, std::abs(loop));
      ++rep.loops_checked;
    }
  }
  return rep;
}

double dissipation(const GraphSystem& g, const CurrentFunction& I) {
  double s = 0.0;
  for (const auto& [edge, current] : I.values()) {
    auto c = g.conductance(edge.first, edge.second);
    if (!c) throw GraphError("current on a non-edge (" + std::to_string(edge.first) + "," +
                             std::to_string(edge.second) + ")");
    s += current * current / *c;
  }
  return s;
}

VertexField integrate_currents(const GraphSystem& g, const Window& w, const CurrentFunction& I,
                               Vertex root) {
  auto r = w.index_of(root);
  if (!r) throw std::invalid_argument("root outside the window");
  auto forest = bfs_forest(g, w, I, *r);
  std::vector<double> v(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) v[i] = -forest.drop[i];
  return VertexField::real(w, v);
}

}  // namespace lapnet
