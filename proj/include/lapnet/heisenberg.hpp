#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lapnet/dense.hpp"
#include "lapnet/field.hpp"
#include "lapnet/graph.hpp"

namespace lapnet {

struct BandEntry {
  std::int64_t offset = 0;  // column n + offset
  Complex value;
};

/// Banded matrix over ℕ₀ given by a row rule, with a materialization
/// window 0..n_max.
///
/// The rule may return rows divided by a positive scale s(n), reported as
/// log s(n); `row` multiplies it back. Chains with geometric conductances
/// use this so that rows far out do not overflow.
class HalfLineBandedOperator {
 public:
  using RowRule = std::function<std::vector<BandEntry>(std::int64_t)>;
  using LogScale = std::function<double(std::int64_t)>;

  HalfLineBandedOperator(std::string name, RowRule rule, int bandwidth, bool hermitian,
                         std::size_t n_max, LogScale log_scale = {});

  const std::string& name() const { return name_; }
  int bandwidth() const { return bandwidth_; }
  bool hermitian() const { return hermitian_; }
  std::size_t n_max() const { return n_max_; }

  HalfLineBandedOperator with_n_max(std::size_t n_max) const;
  HalfLineBandedOperator with_name(std::string name) const;
  HalfLineBandedOperator with_hermitian(bool hermitian) const;

  /// Nonzero entries of row n with columns >= 0, ascending offset.
  std::vector<BandEntry> row(std::int64_t n) const;
  /// Row divided by s(n).
  std::vector<BandEntry> scaled_row(std::int64_t n) const;
  double log_row_scale(std::int64_t n) const;
  Complex entry(std::int64_t n, std::int64_t m) const;

  /// Square section on 0..n_max.
  ComplexMatrix section() const;
  /// Largest |offset| carrying an entry above 1e-14 of its row maximum.
  int measured_bandwidth() const;
  /// Rows of the square section that lose entries to the cut: n > n_max - bandwidth.
  std::size_t first_truncated_row() const;
  /// max |m(n, m) - conj(m(m, n))| over rows outside the truncation strip.
  double interior_hermitian_deviation() const;

  /// (M v)(n) for n = 0..n_max, with v zero beyond its length.
  std::vector<Complex> apply(std::span<const Complex> v) const;

  HalfLineBandedOperator adjoint() const;

 private:
  std::string name_;
  RowRule rule_;
  int bandwidth_;
  bool hermitian_;
  std::size_t n_max_;
  LogScale log_scale_;
};

/// Exact product rule: row n of AB is the finite sum Σ_k a(n,k) b(k,·).
HalfLineBandedOperator banded_multiply(const HalfLineBandedOperator& a,
                                       const HalfLineBandedOperator& b);
HalfLineBandedOperator banded_add(const HalfLineBandedOperator& a, const HalfLineBandedOperator& b,
                                  Complex scale_b = 1.0);

/// m(n, n+1) = m(n+1, n) = √(n+1)/2
HalfLineBandedOperator build_P(std::size_t n_max);
/// m(n, n+1) = -√(n+1)/(2i), m(n+1, n) = √(n+1)/(2i)
HalfLineBandedOperator build_Q(std::size_t n_max);
HalfLineBandedOperator build_QPQ(std::size_t n_max);
/// P² - Q⁴
HalfLineBandedOperator build_hamiltonian(std::size_t n_max);

/// Laplacian of a half-line chain; rows are scaled by c(n, n+1).
HalfLineBandedOperator chain_laplacian_operator(const GraphSystem& g, std::size_t n_max);

}  // namespace lapnet
