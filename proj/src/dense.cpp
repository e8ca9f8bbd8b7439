#include "lapnet/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <omp.h>

namespace lapnet {

namespace {

double conj_if(double x) { return x; }
std::complex<double> conj_if(std::complex<double> z) { return std::conj(z); }
double real_of(double x) { return x; }
double real_of(std::complex<double> z) { return z.real(); }

template <class T>
struct Rotation {
  std::size_t p = 0;
  std::size_t q = 0;
  double c = 1.0;
  double s = 0.0;
  T phase = T(1);  // a(p,q) / |a(p,q)|
  bool active = false;
};

template <class T>
Rotation<T> make_rotation(const DenseMatrix<T>& a, std::size_t p, std::size_t q, double skip) {
  Rotation<T> r;
  r.p = p;
  r.q = q;
  const T apq = a(p, q);
  const double mag = std::abs(apq);
  if (mag <= skip) return r;
  const double app = real_of(a(p, p));
  const double aqq = real_of(a(q, q));
  const double theta = (aqq - app) / (2.0 * mag);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  r.c = 1.0 / std::sqrt(t * t + 1.0);
  r.s = t * r.c;
  r.phase = apq / mag;
  r.active = true;
  return r;
}

// Rows p, q of A <- J^H A.
template <class T>
void rotate_rows(DenseMatrix<T>& a, const Rotation<T>& r) {
  auto rp = a.row(r.p);
  auto rq = a.row(r.q);
  for (std::size_t k = 0; k < rp.size(); ++k) {
    const T x = rp[k];
    const T y = r.phase * rq[k];
    rp[k] = r.c * x - r.s * y;
    rq[k] = r.s * x + r.c * y;
  }
}

// Columns p, q of row k <- (M J) restricted to row k.
template <class T>
void rotate_cols_in_row(std::span<T> row, const Rotation<T>& r) {
  const T x = row[r.p];
  const T y = row[r.q] * conj_if(r.phase);
  row[r.p] = r.c * x - r.s * y;
  row[r.q] = r.s * x + r.c * y;
}

template <class T>
double frobenius(const DenseMatrix<T>& a) {
  double s = 0.0;
  for (const T& v : a.data()) s += std::norm(v);
  return std::sqrt(s);
}

template <class T>
double off_diagonal(const DenseMatrix<T>& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (i != j) s += std::norm(a(i, j));
    }
  }
  return std::sqrt(s);
}

template <class T>
void finish_rotation(DenseMatrix<T>& a, const Rotation<T>& r) {
  a(r.p, r.q) = T(0);
  a(r.q, r.p) = T(0);
  a(r.p, r.p) = T(real_of(a(r.p, r.p)));
  a(r.q, r.q) = T(real_of(a(r.q, r.q)));
}

template <class T>
bool serial_sweep(DenseMatrix<T>& a, DenseMatrix<T>* v, double skip) {
  const std::size_t n = a.rows();
  bool rotated = false;
  for (std::size_t p = 0; p + 1 < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      auto r = make_rotation(a, p, q, skip);
      if (!r.active) continue;
      rotated = true;
      rotate_rows(a, r);
      for (std::size_t k = 0; k < n; ++k) rotate_cols_in_row(a.row(k), r);
      if (v) {
        for (std::size_t k = 0; k < n; ++k) rotate_cols_in_row(v->row(k), r);
      }
      finish_rotation(a, r);
    }
  }
  return rotated;
}

// Round-robin (circle method) schedule over m = n rounded up to even.
std::vector<std::vector<std::pair<std::size_t, std::size_t>>> tournament(std::size_t n) {
  const std::size_t m = n + (n % 2);
  std::vector<std::size_t> pos(m);
  std::iota(pos.begin(), pos.end(), 0);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> rounds;
  for (std::size_t round = 0; round + 1 < m; ++round) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < m / 2; ++i) {
      std::size_t a = pos[i];
      std::size_t b = pos[m - 1 - i];
      if (a >= n || b >= n) continue;  // dummy index for odd n
      pairs.emplace_back(std::min(a, b), std::max(a, b));
    }
    rounds.push_back(std::move(pairs));
    std::rotate(pos.begin() + 1, pos.end() - 1, pos.end());
  }
  return rounds;
}

template <class T>
bool parallel_sweep(DenseMatrix<T>& a, DenseMatrix<T>* v, double skip,
                    const std::vector<std::vector<std::pair<std::size_t, std::size_t>>>& rounds) {
  const std::size_t n = a.rows();
  bool rotated = false;
  std::vector<Rotation<T>> rots;
  for (const auto& pairs : rounds) {
    rots.clear();
    for (auto [p, q] : pairs) {
      auto r = make_rotation(a, p, q, skip);
      if (r.active) rots.push_back(r);
    }
    if (rots.empty()) continue;
    rotated = true;
    const auto nr = static_cast<std::ptrdiff_t>(rots.size());
    const auto nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel
    {
#pragma omp for schedule(static)
      for (std::ptrdiff_t i = 0; i < nr; ++i) rotate_rows(a, rots[i]);
#pragma omp for schedule(static)
      for (std::ptrdiff_t k = 0; k < nn; ++k) {
        auto row = a.row(static_cast<std::size_t>(k));
        for (const auto& r : rots) rotate_cols_in_row(row, r);
      }
      if (v) {
#pragma omp for schedule(static)
        for (std::ptrdiff_t k = 0; k < nn; ++k) {
          auto row = v->row(static_cast<std::size_t>(k));
          for (const auto& r : rots) rotate_cols_in_row(row, r);
        }
      }
    }
    for (const auto& r : rots) finish_rotation(a, r);
  }
  return rotated;
}

}  // namespace

template <class T>
DenseMatrix<T> multiply(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix shapes do not match");
  DenseMatrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T aik = a(i, k);
      if (aik == T(0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

template <class T>
double hermitian_deviation(const DenseMatrix<T>& a) {
  if (a.rows() != a.cols()) return INFINITY;
  double dev = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i; j < a.cols(); ++j) {
      dev = std::max(dev, std::abs(a(i, j) - conj_if(a(j, i))));
    }
  }
  return dev;
}

template <class T>
EigenResult<T> jacobi_eigh(DenseMatrix<T> a, const JacobiOptions& options) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eigensolver needs a square matrix");
  const std::size_t n = a.rows();
  EigenResult<T> out;
  DenseMatrix<T> v = options.vectors ? DenseMatrix<T>::identity(n) : DenseMatrix<T>();
  DenseMatrix<T>* vp = options.vectors ? &v : nullptr;

  const double frob = frobenius(a);
  const double skip = std::max(frob * 1e-300, 1e-18 * frob);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> rounds;
  if (options.exec == Exec::parallel) rounds = tournament(n);

  out.off_norm = off_diagonal(a);
  while (out.off_norm > options.tolerance * frob && out.sweeps < options.max_sweeps) {
    bool rotated = options.exec == Exec::parallel ? parallel_sweep(a, vp, skip, rounds)
                                                  : serial_sweep(a, vp, skip);
    ++out.sweeps;
    out.off_norm = off_diagonal(a);
    if (!rotated) break;
  }
  out.converged = out.off_norm <= options.tolerance * frob || frob == 0.0 ||
                  out.off_norm <= skip * static_cast<double>(n);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return real_of(a(i, i)) < real_of(a(j, j));
  });
  out.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.values[k] = real_of(a(order[k], order[k]));
  if (options.vectors) {
    out.vectors = DenseMatrix<T>(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t k = 0; k < n; ++k) out.vectors(r, k) = v(r, order[k]);
    }
  }
  return out;
}

template DenseMatrix<double> multiply(const DenseMatrix<double>&, const DenseMatrix<double>&);
template DenseMatrix<std::complex<double>> multiply(const DenseMatrix<std::complex<double>>&,
                                                    const DenseMatrix<std::complex<double>>&);
template double hermitian_deviation(const DenseMatrix<double>&);
template double hermitian_deviation(const DenseMatrix<std::complex<double>>&);
template EigenResult<double> jacobi_eigh(DenseMatrix<double>, const JacobiOptions&);
template EigenResult<std::complex<double>> jacobi_eigh(DenseMatrix<std::complex<double>>,
                                                       const JacobiOptions&);

}  // namespace lapnet
