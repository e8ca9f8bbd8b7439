#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lapnet/field.hpp"
#include "lapnet/laplacian.hpp"
#include "lapnet/spectral.hpp"

namespace lapnet {

struct HeatOptions {
  std::size_t dense_cutoff = 512;  // eigendecomposition up to this size, Chebyshev above
  double chebyshev_tolerance = 1e-14;
  Exec exec = Exec::parallel;
};

enum class HeatMethod { eigen, chebyshev };

/// e^{-tM} for a symmetric positive semidefinite matrix. The eigen
/// decomposition, when used, is computed once and reused for every t.
class HeatSemigroup {
 public:
  explicit HeatSemigroup(BandedMatrix m, const HeatOptions& options = {});

  HeatMethod method() const { return method_; }
  const BandedMatrix& matrix() const { return matrix_; }
  VertexField apply(double t, const VertexField& v) const;

  /// Chebyshev coefficients of e^{-t lambda} on [0, spectral_bound]
  std::vector<double> chebyshev_coefficients(double t) const;
  double spectral_bound() const { return bound_; }

 private:
  BandedMatrix matrix_;
  HeatOptions options_;
  HeatMethod method_;
  double bound_ = 0.0;
  std::shared_ptr<const SpectralDecomposition> dec_;
};

VertexField heat_apply(const BandedMatrix& m, double t, const VertexField& v,
                       const HeatOptions& options = {});

struct CrossingEdge {
  Vertex inside = 0;
  Vertex outside = 0;
  double conductance = 0.0;
};

struct BoundaryCoupling {
  std::vector<CrossingEdge> crossing_edges;
  std::vector<Vertex> outside_vertices;  // coupling matrix rows
  std::vector<Vertex> inside_vertices;   // coupling matrix columns
  RealMatrix coupling_matrix;
  double lambda_pf = 0.0;  // largest singular value
  std::size_t iterations = 0;
};

BoundaryCoupling boundary_coupling(const GraphSystem& g, const Window& w);

struct TruncationCheck {
  double t = 0.0;
  double lhs = 0.0;
  double bound = 0.0;
  double lambda_pf = 0.0;
  bool pass = false;
};

/// ‖S_ref(t)v - S_small(t)v‖ against lambda_pf(w_small) t ‖v‖, both
/// semigroups built from compressed truncations.
TruncationCheck truncation_error_check(const GraphSystem& g, const Window& w_small,
                                       const Window& w_ref, double t, const VertexField& v,
                                       const HeatOptions& options = {});

/// Δv - Δ_w v on w plus its exterior (compressed Δ_w). Nonzero only at
/// exterior vertices x, where it equals -Σ_{y ∈ w, y ~ x} c(xy) v(y).
VertexField truncation_difference(const GraphSystem& g, const Window& w, const VertexField& v);

}  // namespace lapnet
