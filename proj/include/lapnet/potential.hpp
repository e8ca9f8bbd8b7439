#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "lapnet/field.hpp"
#include "lapnet/graph.hpp"
#include "lapnet/kernels.hpp"

namespace lapnet {

enum class Solver { cg, dft, closed_form };

std::string to_string(Solver s);
Solver parse_solver(const std::string& s);

class NoSolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual, std::size_t iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  std::size_t iterations() const { return iterations_; }

 private:
  double residual_;
  std::size_t iterations_;
};

struct SolverOptions {
  double relative_tolerance = 1e-10;
  std::size_t max_iterations = 0;  // 0: 20 * |w|
  Exec exec = Exec::parallel;
};

/// Solution of Δv = δ_alpha - δ_beta on the induced subgraph of a window,
/// pinned so that v(grounding) = 0.
struct PotentialSolution {
  VertexField field;
  Vertex alpha = 0;
  Vertex beta = 0;
  double energy = 0.0;
  double residual_norm = 0.0;
  Solver solver = Solver::cg;
  Vertex grounding = 0;
  std::size_t iterations = 0;
};

/// cg: any connected window. dft: the whole of a cyclic graph or periodic
/// lattice. closed_form: c = 1 integer line (range window) or a cycle.
PotentialSolution solve_dipole(const GraphSystem& g, const Window& w, Vertex alpha, Vertex beta,
                               Solver solver = Solver::cg, const SolverOptions& options = {});

/// Closed-form ℤ dipole for (0, k) restricted to w.
PotentialSolution reference_dipole_line(int k, const Window& w);
/// Closed-form cyclic dipole for (0, 1).
PotentialSolution reference_dipole_cyclic(int n);

/// The same field shifted to mean zero.
VertexField mean_zero(const VertexField& v);

/// dist(x, y) = ℰ(v_x - v_y)^{1/2}, where Δv_z = δ_base - δ_z on the window.
/// Potentials are cached; an instance is not safe for concurrent use.
class ResistanceMetric {
 public:
  ResistanceMetric(const GraphSystem& g, Window w, std::optional<Vertex> base = std::nullopt,
                   SolverOptions options = {});

  Vertex base() const { return base_; }
  const Window& window() const { return window_; }

  /// Energy definition; throws std::logic_error when the closed form
  /// disagrees by more than 1e-8.
  double distance(Vertex x, Vertex y);
  /// √2 (v_x(y) + v_y(x) - v_x(x) - v_y(y))^{1/2}
  double closed_form(Vertex x, Vertex y);
  const VertexField& potential(Vertex z);

 private:
  GraphSystem graph_;
  Window window_;
  Vertex base_;
  SolverOptions options_;
  std::unordered_map<Vertex, VertexField> cache_;
};

double resistance_distance(const GraphSystem& g, const Window& w, Vertex x, Vertex y);

/// 2 · min over paths in w of Σ 1/c(e).
double path_resistance_bound(const GraphSystem& g, const Window& w, Vertex alpha, Vertex beta);

/// Edge currents stored against the (min, max) orientation.
class CurrentFunction {
 public:
  void set(Vertex x, Vertex y, double current);
  /// I(x, y) = -I(y, x); zero for unknown edges.
  double operator()(Vertex x, Vertex y) const;
  const std::map<std::pair<Vertex, Vertex>, double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

 private:
  std::map<std::pair<Vertex, Vertex>, double> values_;
};

/// I(x, y) = c(xy)(v(x) - v(y)) on every window edge.
CurrentFunction currents_from_potential(const GraphSystem& g, const PotentialSolution& sol);
CurrentFunction currents_from_field(const GraphSystem& g, const VertexField& v);

struct KirchhoffReport {
  double node_law_max_violation = 0.0;
  double loop_law_max_violation = 0.0;
  std::size_t loops_checked = 0;
};

/// Node law Σ_y I(x, y) = (δ_alpha - δ_beta)(x) at every window vertex
/// (zero source without a dipole) and the loop law Σ I/c = 0 over the
/// fundamental cycles of a BFS spanning tree of the window.
KirchhoffReport verify_kirchhoff(const GraphSystem& g, const Window& w, const CurrentFunction& I,
                                 std::optional<std::pair<Vertex, Vertex>> dipole = std::nullopt);

/// Σ over stored edges of I(e)²/c(e).
double dissipation(const GraphSystem& g, const CurrentFunction& I);

/// Potential recovered along a spanning tree from v(root) = 0.
VertexField integrate_currents(const GraphSystem& g, const Window& w, const CurrentFunction& I,
                               Vertex root);

}  // namespace lapnet
