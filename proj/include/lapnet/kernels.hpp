#pragma once

// Data-parallel building blocks. Every kernel has a serial reference in
// `kernels::serial` and an OpenMP twin in `kernels::parallel`; the two must
// agree to rounding (see tests/test_kernels.cpp, bench/bench_kernels.cpp).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace lapnet {

enum class Exec { serial, parallel };

/// Compressed sparse row matrix with real entries.
struct CsrMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::size_t> col;
  std::vector<double> val;

  std::size_t nnz() const { return val.size(); }
  double entry(std::size_t r, std::size_t c) const;
};

namespace kernels {

namespace serial {
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void xpay(std::span<const double> x, double alpha, std::span<double> y);
double sum(std::span<const double> x);
void dft_axis(std::span<std::complex<double>> data, std::size_t extent,
              std::size_t axis, bool inverse);
}  // namespace serial

namespace parallel {
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void xpay(std::span<const double> x, double alpha, std::span<double> y);
double sum(std::span<const double> x);
void dft_axis(std::span<std::complex<double>> data, std::size_t extent,
              std::size_t axis, bool inverse);
}  // namespace parallel

// y = A x
void spmv(Exec ex, const CsrMatrix& a, std::span<const double> x, std::span<double> y);
double dot(Exec ex, std::span<const double> x, std::span<const double> y);
// y += alpha x
void axpy(Exec ex, double alpha, std::span<const double> x, std::span<double> y);
// y = x + alpha y
void xpay(Exec ex, std::span<const double> x, double alpha, std::span<double> y);
double sum(Exec ex, std::span<const double> x);

/// Unnormalized DFT along one axis of an extent^dims array stored with axis 0
/// fastest: X(k) = sum_n x(n) exp(-+2 pi i k n / N). The inverse applies the
/// 1/N factor.
void dft_axis(Exec ex, std::span<std::complex<double>> data, std::size_t extent,
              std::size_t axis, bool inverse);

}  // namespace kernels
}  // namespace lapnet
