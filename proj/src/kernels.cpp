#include "lapnet/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <omp.h>

namespace lapnet {

double CsrMatrix::entry(std::size_t r, std::size_t c) const {
  for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
    if (col[k] == c) return val[k];
  }
  return 0.0;
}

namespace kernels {

namespace {

std::vector<std::complex<double>> twiddles(std::size_t n, bool inverse) {
  std::vector<std::complex<double>> w(n);
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t k = 0; k < n; ++k) {
    double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    w[k] = {std::cos(angle), std::sin(angle)};
  }
  return w;
}

// One line of length n with stride; `scratch` has room for n values.
void dft_line(std::complex<double>* base, std::size_t n, std::size_t stride,
              const std::vector<std::complex<double>>& w, bool inverse,
              std::complex<double>* scratch) {
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc{};
    std::size_t idx = 0;
    for (std::size_t j = 0; j < n; ++j) {
      acc += base[j * stride] * w[idx];
      idx += k;
      if (idx >= n) idx -= n;
    }
    scratch[k] = acc;
  }
  const double scale = inverse ? 1.0 / static_cast<double>(n) : 1.0;
  for (std::size_t k = 0; k < n; ++k) base[k * stride] = scratch[k] * scale;
}

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

namespace serial {

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  for (std::size_t r = 0; r < a.rows; ++r) {
    double acc = 0.0;
    for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) acc += a.val[k] * x[a.col[k]];
    y[r] = acc;
  }
}

double dot(std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void xpay(std::span<const double> x, double alpha, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + alpha * y[i];
}

double sum(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v;
  return acc;
}

void dft_axis(std::span<std::complex<double>> data, std::size_t extent,
              std::size_t axis, bool inverse) {
  const auto w = twiddles(extent, inverse);
  const std::size_t stride = ipow(extent, axis);
  const std::size_t lines = data.size() / extent;
  std::vector<std::complex<double>> scratch(extent);
  for (std::size_t line = 0; line < lines; ++line) {
    std::size_t low = line % stride;
    std::size_t high = line / stride;
    dft_line(data.data() + low + high * stride * extent, extent, stride, w, inverse,
             scratch.data());
  }
}

}  // namespace serial

namespace parallel {

namespace {

// Fixed-size blocks summed in block order; independent of the thread count.
constexpr std::size_t kBlock = 4096;

template <class F>
double ordered_reduce(std::size_t n, F term) {
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks, 0.0);
  const auto nb = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += term(i);
    partial[static_cast<std::size_t>(b)] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  const auto rows = static_cast<std::ptrdiff_t>(a.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    double acc = 0.0;
    for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) acc += a.val[k] * x[a.col[k]];
    y[r] = acc;
  }
}

double dot(std::span<const double> x, std::span<const double> y) {
  return ordered_reduce(x.size(), [&](std::size_t i) { return x[i] * y[i]; });
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void xpay(std::span<const double> x, double alpha, std::span<double> y) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] = x[i] + alpha * y[i];
}

double sum(std::span<const double> x) {
  return ordered_reduce(x.size(), [&](std::size_t i) { return x[i]; });
}

void dft_axis(std::span<std::complex<double>> data, std::size_t extent,
              std::size_t axis, bool inverse) {
  const auto w = twiddles(extent, inverse);
  const std::size_t stride = ipow(extent, axis);
  const auto lines = static_cast<std::ptrdiff_t>(data.size() / extent);
#pragma omp parallel
  {
    std::vector<std::complex<double>> scratch(extent);
#pragma omp for schedule(static)
    for (std::ptrdiff_t line = 0; line < lines; ++line) {
      std::size_t low = static_cast<std::size_t>(line) % stride;
      std::size_t high = static_cast<std::size_t>(line) / stride;
      dft_line(data.data() + low + high * stride * extent, extent, stride, w, inverse,
               scratch.data());
    }
  }
}

}  // namespace parallel

void spmv(Exec ex, const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  ex == Exec::serial ? serial::spmv(a, x, y) : parallel::spmv(a, x, y);
}
double dot(Exec ex, std::span<const double> x, std::span<const double> y) {
  return ex == Exec::serial ? serial::dot(x, y) : parallel::dot(x, y);
}
void axpy(Exec ex, double alpha, std::span<const double> x, std::span<double> y) {
  ex == Exec::serial ? serial::axpy(alpha, x, y) : parallel::axpy(alpha, x, y);
}
void xpay(Exec ex, std::span<const double> x, double alpha, std::span<double> y) {
  ex == Exec::serial ? serial::xpay(x, alpha, y) : parallel::xpay(x, alpha, y);
}
double sum(Exec ex, std::span<const double> x) {
  return ex == Exec::serial ? serial::sum(x) : parallel::sum(x);
}
void dft_axis(Exec ex, std::span<std::complex<double>> data, std::size_t extent,
              std::size_t axis, bool inverse) {
  ex == Exec::serial ? serial::dft_axis(data, extent, axis, inverse)
                     : parallel::dft_axis(data, extent, axis, inverse);
}

}  // namespace kernels
}  // namespace lapnet
