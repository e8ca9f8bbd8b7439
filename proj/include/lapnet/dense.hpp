#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "lapnet/kernels.hpp"

namespace lapnet {

/// Row-major dense matrix.
template <class T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<const T> data() const { return data_; }
  std::span<T> data() { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RealMatrix = DenseMatrix<double>;
using ComplexMatrix = DenseMatrix<std::complex<double>>;

template <class T>
DenseMatrix<T> multiply(const DenseMatrix<T>& a, const DenseMatrix<T>& b);

/// max |a(i,j) - conj(a(j,i))|; zero for Hermitian input.
template <class T>
double hermitian_deviation(const DenseMatrix<T>& a);

struct JacobiOptions {
  double tolerance = 1e-14;  // stop when off-diagonal Frobenius norm <= tolerance * ||A||_F
  int max_sweeps = 100;
  bool vectors = true;
  Exec exec = Exec::parallel;
};

template <class T>
struct EigenResult {
  std::vector<double> values;  // ascending
  DenseMatrix<T> vectors;      // column j belongs to values[j]
  int sweeps = 0;
  double off_norm = 0.0;
  bool converged = false;
};

/// Cyclic Jacobi eigensolver for real symmetric or complex Hermitian input.
/// Exec::serial runs the classic cyclic-by-row order; Exec::parallel runs a
/// round-robin order in which each round rotates disjoint index pairs, so
/// the pairs of a round can be applied concurrently.
template <class T>
EigenResult<T> jacobi_eigh(DenseMatrix<T> a, const JacobiOptions& options = {});

}  // namespace lapnet
