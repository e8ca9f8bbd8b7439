#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lapnet/dense.hpp"
#include "lapnet/kernels.hpp"
#include "lapnet/laplacian.hpp"

using namespace lapnet;
namespace k = lapnet::kernels;

namespace {

std::vector<double> random_reals(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

CsrMatrix lattice_matrix(int dim, int extent) {
  auto g = GraphSystem::lattice(dim, extent);
  return assemble_matrix(g, Window::whole(g), Boundary::induced).csr();
}

template <class T>
DenseMatrix<T> random_hermitian(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> d;
  DenseMatrix<T> a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      T x;
      if constexpr (std::is_same_v<T, double>) {
        x = d(rng);
      } else {
        x = T(d(rng), i == j ? 0.0 : d(rng));
      }
      a(i, j) = x;
      if constexpr (std::is_same_v<T, double>) {
        a(j, i) = x;
      } else {
        a(j, i) = std::conj(x);
      }
    }
  }
  return a;
}

}  // namespace

TEST(Kernels, SpmvSerialMatchesParallel) {
  for (auto [dim, extent] : {std::pair{1, 1000}, {2, 40}, {3, 12}}) {
    auto a = lattice_matrix(dim, extent);
    auto x = random_reals(a.cols, 1);
    std::vector<double> ys(a.rows), yp(a.rows);
    k::serial::spmv(a, x, ys);
    k::parallel::spmv(a, x, yp);
    EXPECT_EQ(ys, yp);
    // against the entries directly
    for (std::size_t r = 0; r < a.rows; r += 37) {
      double want = 0.0;
      for (std::size_t c = 0; c < a.cols; ++c) want += a.entry(r, c) * x[c];
      EXPECT_NEAR(ys[r], want, 1e-12);
    }
  }
}

TEST(Kernels, ReductionsAgreeAndAreDeterministic) {
  for (std::size_t n : {1u, 17u, 1000u, 100003u}) {
    auto x = random_reals(n, 2), y = random_reals(n, 3);
    const double ds = k::serial::dot(x, y), dp = k::parallel::dot(x, y);
    EXPECT_NEAR(ds, dp, 1e-12 * std::sqrt(double(n)));
    const double ss = k::serial::sum(x), sp = k::parallel::sum(x);
    EXPECT_NEAR(ss, sp, 1e-12 * std::sqrt(double(n)));
    for (int rep = 0; rep < 5; ++rep) {
      EXPECT_EQ(k::parallel::dot(x, y), dp);
      EXPECT_EQ(k::parallel::sum(x), sp);
    }
  }
}

TEST(Kernels, AxpyAndXpay) {
  auto x = random_reals(5001, 4);
  auto y0 = random_reals(5001, 5);
  auto ys = y0, yp = y0;
  k::serial::axpy(0.7, x, ys);
  k::parallel::axpy(0.7, x, yp);
  EXPECT_EQ(ys, yp);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(ys[i], y0[i] + 0.7 * x[i]);
  ys = y0;
  yp = y0;
  k::serial::xpay(x, -1.3, ys);
  k::parallel::xpay(x, -1.3, yp);
  EXPECT_EQ(ys, yp);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(ys[i], x[i] + -1.3 * y0[i]);
}

TEST(Kernels, DispatchFollowsExec) {
  auto x = random_reals(300, 6), y = random_reals(300, 7);
  EXPECT_EQ(k::dot(Exec::serial, x, y), k::serial::dot(x, y));
  EXPECT_EQ(k::dot(Exec::parallel, x, y), k::parallel::dot(x, y));
  EXPECT_EQ(k::sum(Exec::serial, x), k::serial::sum(x));
}

TEST(Kernels, DftAxisMatchesDirectSum) {
  const std::size_t n = 6;
  std::mt19937 rng(8);
  std::normal_distribution<double> d;
  std::vector<std::complex<double>> data(n * n * n);
  for (auto& z : data) z = {d(rng), d(rng)};
  for (std::size_t axis = 0; axis < 3; ++axis) {
    auto s = data, p = data;
    k::serial::dft_axis(s, n, axis, false);
    k::parallel::dft_axis(p, n, axis, false);
    std::size_t stride = 1;
    for (std::size_t a = 0; a < axis; ++a) stride *= n;
    for (std::size_t idx = 0; idx < data.size(); ++idx) {
      EXPECT_LT(std::abs(s[idx] - p[idx]), 1e-12);
      const std::size_t kk = (idx / stride) % n;
      const std::size_t base = idx - kk * stride;
      std::complex<double> want = 0.0;
      for (std::size_t m = 0; m < n; ++m) {
        want += data[base + m * stride] *
                std::polar(1.0, -2 * std::numbers::pi * double(kk * m) / double(n));
      }
      EXPECT_LT(std::abs(s[idx] - want), 1e-12);
    }
    k::parallel::dft_axis(p, n, axis, true);
    for (std::size_t idx = 0; idx < data.size(); ++idx) EXPECT_LT(std::abs(p[idx] - data[idx]), 1e-12);
  }
}

TEST(Kernels, BandedApplySerialMatchesParallel) {
  auto g = GraphSystem::lattice(2, 30);
  auto w = Window::whole(g);
  auto m = assemble_matrix(g, w, Boundary::induced);
  auto x = random_reals(w.size(), 9);
  auto v = VertexField::real(w, x);
  auto a = m.apply(v, Exec::serial), b = m.apply(v, Exec::parallel);
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_EQ(a.at_index(i), b.at_index(i));
}

TEST(Jacobi, RealSerialMatchesParallel) {
  auto a = random_hermitian<double>(40, 10);
  JacobiOptions so, po;
  so.exec = Exec::serial;
  po.exec = Exec::parallel;
  auto s = jacobi_eigh(a, so), p = jacobi_eigh(a, po);
  EXPECT_TRUE(s.converged);
  EXPECT_TRUE(p.converged);
  ASSERT_EQ(s.values.size(), 40u);
  for (std::size_t i = 0; i < 40; ++i) EXPECT_NEAR(s.values[i], p.values[i], 1e-10);
  // A v = λ v
  for (std::size_t j = 0; j < 40; ++j) {
    for (std::size_t i = 0; i < 40; ++i) {
      double av = 0.0;
      for (std::size_t m = 0; m < 40; ++m) av += a(i, m) * p.vectors(m, j);
      EXPECT_NEAR(av, p.values[j] * p.vectors(i, j), 1e-9);
    }
  }
}

TEST(Jacobi, ComplexSerialMatchesParallel) {
  auto a = random_hermitian<std::complex<double>>(30, 11);
  JacobiOptions so, po;
  so.exec = Exec::serial;
  po.exec = Exec::parallel;
  auto s = jacobi_eigh(a, so), p = jacobi_eigh(a, po);
  double trace = 0.0, sum = 0.0;
  for (std::size_t i = 0; i < 30; ++i) {
    EXPECT_NEAR(s.values[i], p.values[i], 1e-10);
    trace += a(i, i).real();
    sum += p.values[i];
  }
  EXPECT_NEAR(trace, sum, 1e-10);
  for (std::size_t j = 0; j < 30; j += 7) {
    for (std::size_t i = 0; i < 30; ++i) {
      std::complex<double> av = 0.0;
      for (std::size_t m = 0; m < 30; ++m) av += a(i, m) * p.vectors(m, j);
      EXPECT_LT(std::abs(av - p.values[j] * p.vectors(i, j)), 1e-9);
    }
  }
}

TEST(Jacobi, ParallelIsDeterministic) {
  auto a = random_hermitian<double>(64, 12);
  auto first = jacobi_eigh(a);
  for (int rep = 0; rep < 3; ++rep) {
    auto again = jacobi_eigh(a);
    EXPECT_EQ(again.values, first.values);
  }
}

TEST(Jacobi, KnownSpectrum) {
  RealMatrix a(2, 2);
  a(0, 0) = 2;
  a(0, 1) = a(1, 0) = 1;
  a(1, 1) = 2;
  auto e = jacobi_eigh(a);
  EXPECT_NEAR(e.values[0], 1.0, 1e-14);
  EXPECT_NEAR(e.values[1], 3.0, 1e-14);
}
