#pragma once

#include <string>
#include <vector>

#include "lapnet/dense.hpp"
#include "lapnet/field.hpp"
#include "lapnet/graph.hpp"
#include "lapnet/kernels.hpp"

namespace lapnet {

/// How a window truncation treats edges leaving the window.
///   induced:    Laplacian of the induced subgraph; the diagonal only counts
///               edges inside the window.
///   compressed: P_w Δ P_w; the diagonal is the full weighted degree, which
///               is the same as evaluating Δ on the zero extension.
enum class Boundary { induced, compressed };

std::string to_string(Boundary b);
Boundary parse_boundary(const std::string& s);

/// Real sparse matrix indexed by the vertices of a window.
class BandedMatrix {
 public:
  BandedMatrix(Window w, CsrMatrix csr, Boundary boundary, bool hermitian);

  const Window& window() const { return window_; }
  const CsrMatrix& csr() const { return csr_; }
  std::size_t size() const { return window_.size(); }
  /// max |i - j| over stored nonzeros, in window positions.
  std::size_t bandwidth() const { return bandwidth_; }
  Boundary boundary() const { return boundary_; }
  bool hermitian() const { return hermitian_; }

  double entry(Vertex x, Vertex y) const;
  VertexField apply(const VertexField& v, Exec ex = Exec::parallel) const;
  RealMatrix dense() const;

  /// `# window=... boundary=... bandwidth=...`, then `row,col,value` sorted
  /// by (row, col).
  std::string dump_csv() const;

 private:
  Window window_;
  CsrMatrix csr_;
  Boundary boundary_;
  bool hermitian_;
  std::size_t bandwidth_ = 0;
};

/// Support vertices with a neighbour outside the field's window.
struct TruncationReport {
  std::vector<Vertex> exposed;
  std::size_t crossing_edges = 0;

  bool truncated() const { return !exposed.empty(); }
  std::string message() const;
};

struct LaplacianResult {
  VertexField field;
  TruncationReport truncation;
};

/// (Δv)(x) on the window of v. Compressed sums over every neighbour (values
/// outside the window are zero); induced sums over neighbours in the window.
LaplacianResult apply_laplacian(const GraphSystem& g, const VertexField& v,
                                Boundary boundary = Boundary::compressed);

/// Δ of the zero extension of v, on the window plus its one-edge exterior.
VertexField apply_laplacian_extended(const GraphSystem& g, const VertexField& v);

double weighted_degree(const GraphSystem& g, Vertex x);

BandedMatrix assemble_matrix(const GraphSystem& g, const Window& w, Boundary boundary);

/// Sparse product on a common window.
BandedMatrix multiply(const BandedMatrix& a, const BandedMatrix& b);

/// Ordered-pair sum over edges inside the window of v; crossing edges are
/// left out and counted in `report`.
double energy(const GraphSystem& g, const VertexField& v, TruncationReport* report = nullptr);

/// Sesquilinear ordered-pair form, conjugate-linear in u.
Complex energy_bilinear(const GraphSystem& g, const VertexField& u, const VertexField& v);

/// |Σ_x (Δv)(x)| over the window and its exterior.
double row_sum(const GraphSystem& g, const VertexField& v);

/// Largest row_sum over the Dirac basis of w.
double row_sum_check(const GraphSystem& g, const Window& w);

}  // namespace lapnet
