#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lapnet/dense.hpp"
#include "lapnet/field.hpp"
#include "lapnet/laplacian.hpp"

namespace lapnet {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// {4 sin²(πk/N) : k = 0..N-1}, ascending.
std::vector<double> cyclic_spectrum(int n);

/// 4 Σ_k sin²(x_k / 2); the dimension is x.size().
double lattice_symbol(std::span<const double> x);

enum class SpectralSource { dense_solver, closed_form_cyclic, symbol, lanczos_bounds };

std::string to_string(SpectralSource s);

struct EigenBounds {
  double ritz_min = 0.0;
  double ritz_max = 0.0;
  double gershgorin_max = 0.0;
  std::size_t steps = 0;
};

struct SpectralDecomposition {
  explicit SpectralDecomposition(Window w) : window(std::move(w)) {}

  Window window;
  std::vector<double> eigenvalues;  // ascending
  RealMatrix eigenvectors;          // orthonormal columns (empty for bounds)
  SpectralSource source = SpectralSource::dense_solver;
  double reconstruction_error = 0.0;  // max |A - Q Λ Qᵀ|
  std::optional<EigenBounds> bounds;

  bool has_vectors() const { return eigenvectors.rows() == window.size() && window.size() > 0; }
};

struct SpectrumOptions {
  std::size_t dense_cap = 4096;
  std::size_t lanczos_steps = 200;
  Exec exec = Exec::parallel;
};

/// Dense Jacobi decomposition up to the cap; above it only Lanczos bounds.
SpectralDecomposition truncated_spectrum(const BandedMatrix& m, const SpectrumOptions& options = {});

/// Decomposition of the whole cycle from the closed-form eigenvectors.
SpectralDecomposition cyclic_decomposition(int n);

/// Lanczos Ritz extremes of a symmetric matrix plus the Gershgorin radius.
EigenBounds lanczos_bounds(const BandedMatrix& m, std::size_t steps, Exec ex = Exec::parallel);

enum class ZeroModes { reject, pseudo_inverse };

/// Q f(Λ) Qᵀ v. Eigenvalues within 1e-10 of zero are treated as zero; in
/// pseudo-inverse mode they map to 0, otherwise a non-finite f value raises
/// DomainError.
VertexField apply_spectral_function(const std::function<double(double)>& f,
                                    const SpectralDecomposition& dec, const VertexField& v,
                                    ZeroModes zero_modes = ZeroModes::reject);

/// ‖Δ^s v‖ on the truncation; s < 0 uses pseudo-inverse mode.
double hs_norm(const SpectralDecomposition& dec, const VertexField& v, double s);

struct HsMembership {
  int k = 1;
  double s = 0.0;
  bool member = false;
  bool boundary_case = false;
  std::string verdict;             // "member", "non-member", or the boundary note
  bool analytic_member = false;    // integrand ~ x^(2(2s-1)) near 0 is integrable iff s > 1/4
  double analytic_exponent = 0.0;  // 2(2s - 1)
  std::vector<double> integral_sequence;
  double last_relative_change = 0.0;
  double last_shell_ratio = 0.0;
};

struct HsOptions {
  double relative_change = 1e-3;
  int min_levels = 8;
  int max_levels = 160;
  int nodes = 32;  // Gauss-Legendre nodes per shell
};

/// Decides whether the ℤ dipole δ_0 - δ_k belongs to H(s) from the
/// integrals (1/π)∫_{ε_j}^{π} (4 sin²(x/2))^{2s} |v̂(x)|² dx on the
/// dyadic cut-offs ε_j = 2^{-j}π.
HsMembership hs_membership_line(int k, double s, const HsOptions& options = {});

/// Nodes and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

}  // namespace lapnet
