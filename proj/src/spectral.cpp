#include "lapnet/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <omp.h>

namespace lapnet {

std::string to_string(SpectralSource s) {
  switch (s) {
    case SpectralSource::dense_solver: return "dense-solver";
    case SpectralSource::closed_form_cyclic: return "closed-form-cyclic";
    case SpectralSource::symbol: return "symbol";
    case SpectralSource::lanczos_bounds: return "lanczos-bounds";
  }
  return "?";
}

std::vector<double> cyclic_spectrum(int n) {
  if (n < 3) throw GraphError("cyclic spectrum needs N >= 3");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double s = std::sin(std::numbers::pi * k / n);
    out[static_cast<std::size_t>(k)] = 4.0 * s * s;
  }
  std::sort(out.begin(), out.end());
  return out;
}

double lattice_symbol(std::span<const double> x) {
  double s = 0.0;
  for (double xk : x) {
    const double t = std::sin(xk / 2.0);
    s += 4.0 * t * t;
  }
  return s;
}

namespace {

void require_symmetric(const BandedMatrix& m) {
  const CsrMatrix& a = m.csr();
  double scale = 0.0;
  for (double v : a.val) scale = std::max(scale, std::abs(v));
  for (std::size_t r = 0; r < a.rows; ++r) {
    for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) {
      if (std::abs(a.val[k] - a.entry(a.col[k], r)) > 1e-12 * std::max(scale, 1.0)) {
        throw std::invalid_argument("matrix is not Hermitian");
      }
    }
  }
}

double reconstruction_error(const RealMatrix& a, const std::vector<double>& lambda,
                            const RealMatrix& q) {
  const auto n = static_cast<std::ptrdiff_t>(a.rows());
  double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::ptrdiff_t k = 0; k < n; ++k) s += q(i, k) * lambda[k] * q(j, k);
      worst = std::max(worst, std::abs(a(i, j) - s));
    }
  }
  return worst;
}

}  // namespace

EigenBounds lanczos_bounds(const BandedMatrix& m, std::size_t steps, Exec ex) {
  require_symmetric(m);
  const CsrMatrix& a = m.csr();
  const std::size_t n = m.size();
  EigenBounds b;
  for (std::size_t r = 0; r < n; ++r) {
    double row = 0.0;
    for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) {
      row += a.col[k] == r ? a.val[k] : std::abs(a.val[k]);
    }
    b.gershgorin_max = std::max(b.gershgorin_max, row);
  }
  steps = std::min(steps, n);
  std::vector<std::vector<double>> basis;
  std::vector<double> alpha, beta;
  std::vector<double> q(n), w(n);
  for (std::size_t i = 0; i < n; ++i) q[i] = 1.0 + 0.5 * std::sin(1.7 * static_cast<double>(i) + 0.3);
  double nq = std::sqrt(kernels::dot(ex, q, q));
  for (double& e : q) e /= nq;
  for (std::size_t j = 0; j < steps; ++j) {
    basis.push_back(q);
    kernels::spmv(ex, a, q, w);
    const double aj = kernels::dot(ex, q, w);
    alpha.push_back(aj);
    // full reorthogonalization against the stored basis, twice
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : basis) kernels::axpy(ex, -kernels::dot(ex, u, w), u, w);
    }
    const double bj = std::sqrt(kernels::dot(ex, w, w));
    if (bj < 1e-12 * std::max(1.0, b.gershgorin_max) || j + 1 == steps) break;
    beta.push_back(bj);
    for (std::size_t i = 0; i < n; ++i) q[i] = w[i] / bj;
  }
  const std::size_t k = alpha.size();
  RealMatrix t(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    t(i, i) = alpha[i];
    if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[i];
  }
  auto eig = jacobi_eigh(t, {.tolerance = 1e-15, .vectors = false, .exec = Exec::serial});
  b.ritz_min = eig.values.front();
  b.ritz_max = eig.values.back();
  b.steps = k;
  return b;
}

SpectralDecomposition truncated_spectrum(const BandedMatrix& m, const SpectrumOptions& options) {
  require_symmetric(m);
  SpectralDecomposition dec{m.window()};
  if (m.size() > options.dense_cap) {
    auto b = lanczos_bounds(m, options.lanczos_steps, options.exec);
    dec.source = SpectralSource::lanczos_bounds;
    dec.eigenvalues = {b.ritz_min, b.ritz_max};
    dec.bounds = b;
    return dec;
  }
  RealMatrix a = m.dense();
  auto eig = jacobi_eigh(a, {.exec = options.exec});
  dec.eigenvalues = std::move(eig.values);
  dec.eigenvectors = std::move(eig.vectors);
  dec.source = SpectralSource::dense_solver;
  dec.reconstruction_error = reconstruction_error(a, dec.eigenvalues, dec.eigenvectors);
  return dec;
}

SpectralDecomposition cyclic_decomposition(int n) {
  if (n < 3) throw GraphError("cyclic spectrum needs N >= 3");
  const auto nn = static_cast<std::size_t>(n);
  std::vector<std::size_t> order(nn);
  std::vector<double> lambda(nn);
  for (std::size_t k = 0; k < nn; ++k) {
    const double s = std::sin(std::numbers::pi * static_cast<double>(k) / n);
    lambda[k] = 4.0 * s * s;
  }
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return lambda[i] < lambda[j]; });
  SpectralDecomposition dec{Window::range(0, n - 1)};
  dec.source = SpectralSource::closed_form_cyclic;
  dec.eigenvectors = RealMatrix(nn, nn);
  for (std::size_t col = 0; col < nn; ++col) {
    const std::size_t k = order[col];
    dec.eigenvalues.push_back(lambda[k]);
    const bool use_sin = 2 * k > nn;
    const bool single = k == 0 || 2 * k == nn;
    const double norm = std::sqrt(single ? static_cast<double>(n) : n / 2.0);
    for (std::size_t j = 0; j < nn; ++j) {
      const double phase = 2.0 * std::numbers::pi * static_cast<double>(k * j % nn) / n;
      dec.eigenvectors(j, col) = (use_sin ? std::sin(phase) : std::cos(phase)) / norm;
    }
  }
  return dec;
}

VertexField apply_spectral_function(const std::function<double(double)>& f,
                                    const SpectralDecomposition& dec, const VertexField& v,
                                    ZeroModes zero_modes) {
  if (!dec.has_vectors()) throw std::invalid_argument("decomposition has no eigenvectors");
  const VertexField u = v.window() == dec.window ? v : v.on(dec.window);
  const std::size_t n = dec.window.size();
  const RealMatrix& q = dec.eigenvectors;
  double top = 1.0;
  for (double l : dec.eigenvalues) top = std::max(top, std::abs(l));
  std::vector<double> fl(n);
  for (std::size_t k = 0; k < n; ++k) {
    double l = dec.eigenvalues[k];
    const bool zero = std::abs(l) <= 1e-10 * top;
    if (zero) l = 0.0;
    if (zero && zero_modes == ZeroModes::pseudo_inverse) {
      fl[k] = 0.0;
      continue;
    }
    fl[k] = f(l);
    if (!std::isfinite(fl[k])) {
      throw DomainError("function is not finite at eigenvalue " + std::to_string(l));
    }
  }
  const auto nn = static_cast<std::ptrdiff_t>(n);
  std::vector<Complex> coef(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < nn; ++k) {
    Complex s{};
    for (std::size_t i = 0; i < n; ++i) s += q(i, k) * u.at_index(i);
    coef[k] = s * fl[k];
  }
  std::vector<Complex> out(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < nn; ++i) {
    Complex s{};
    for (std::size_t k = 0; k < n; ++k) s += q(i, k) * coef[k];
    out[i] = s;
  }
  return VertexField(dec.window, std::move(out));
}

double hs_norm(const SpectralDecomposition& dec, const VertexField& v, double s) {
  auto mode = s < 0.0 ? ZeroModes::pseudo_inverse : ZeroModes::reject;
  return apply_spectral_function([s](double l) { return std::pow(l, s); }, dec, v, mode).norm();
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

HsMembership hs_membership_line(int k, double s, const HsOptions& options) {
  if (k < 1) throw std::invalid_argument("hs membership needs k >= 1");
  HsMembership out;
  out.k = k;
  out.s = s;
  out.analytic_exponent = 2.0 * (2.0 * s - 1.0);
  out.analytic_member = s > 0.25;
  out.boundary_case = s == 0.25;

  auto integrand = [k, s](double x) {
    const double h = std::sin(x / 2.0);
    const double q = std::sin(k * x / 2.0);
    return std::pow(4.0 * h * h, 2.0 * s) * q * q / (4.0 * h * h * h * h) / std::numbers::pi;
  };
  auto [nodes, weights] = gauss_legendre(options.nodes);

  double total = 0.0;
  double prev_shell = 0.0;
  double hi = std::numbers::pi;
  for (int j = 0; j < options.max_levels; ++j) {
    const double lo = hi / 2.0;
    const double mid = (hi + lo) / 2.0, half = (hi - lo) / 2.0;
    double shell = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) shell += weights[i] * integrand(mid + half * nodes[i]);
    shell *= half;
    total += shell;
    out.integral_sequence.push_back(total);
    out.last_relative_change = shell / total;
    out.last_shell_ratio = j > 0 ? shell / prev_shell : 0.0;
    prev_shell = shell;
    hi = lo;
    if (j + 1 >= options.min_levels && out.last_relative_change < options.relative_change &&
        out.last_shell_ratio < 1.0) {
      out.member = true;
      break;
    }
  }
  if (out.boundary_case) {
    out.member = false;
    out.verdict = "boundary case, non-member by the strict inequality";
  } else {
    out.verdict = out.member ? "member" : "non-member";
  }
  return out;
}

}  // namespace lapnet
