#include "lapnet/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>

namespace lapnet {

namespace {

double gershgorin(const BandedMatrix& m) {
  const CsrMatrix& a = m.csr();
  double g = 0.0;
  for (std::size_t r = 0; r < a.rows; ++r) {
    double row = 0.0;
    for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) {
      row += a.col[k] == r ? a.val[k] : std::abs(a.val[k]);
    }
    g = std::max(g, row);
  }
  return g;
}

bool diagonally_dominant(const BandedMatrix& m) {
  const CsrMatrix& a = m.csr();
  for (std::size_t r = 0; r < a.rows; ++r) {
    double diag = 0.0, off = 0.0;
    for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) {
      if (a.col[k] == r) diag = a.val[k];
      else off += std::abs(a.val[k]);
    }
    if (diag < off - 1e-12 * std::max(1.0, diag)) return false;
  }
  return true;
}

}  // namespace

HeatSemigroup::HeatSemigroup(BandedMatrix m, const HeatOptions& options)
    : matrix_(std::move(m)), options_(options) {
  bound_ = gershgorin(matrix_);
  if (matrix_.size() <= options_.dense_cutoff) {
    method_ = HeatMethod::eigen;
    auto dec = truncated_spectrum(matrix_, {.exec = options_.exec});
    if (dec.eigenvalues.front() < -1e-9) {
      throw std::invalid_argument("heat semigroup needs a positive semidefinite matrix");
    }
    dec_ = std::make_shared<const SpectralDecomposition>(std::move(dec));
  } else {
    method_ = HeatMethod::chebyshev;
    if (!diagonally_dominant(matrix_)) {
      auto b = lanczos_bounds(matrix_, 200, options_.exec);
      if (b.ritz_min < -1e-9) {
        throw std::invalid_argument("heat semigroup needs a positive semidefinite matrix");
      }
    }
  }
}

std::vector<double> HeatSemigroup::chebyshev_coefficients(double t) const {
  // lambda = (L/2)(1 + y), y in [-1, 1]
  const double half = bound_ / 2.0;
  auto f = [&](double y) { return std::exp(-t * half * (1.0 + y)); };
  std::vector<double> c;
  for (std::size_t nodes = 64;; nodes *= 2) {
    c.assign(nodes, 0.0);
    std::vector<double> fv(nodes);
    for (std::size_t j = 0; j < nodes; ++j) {
      fv[j] = f(std::cos(std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(nodes)));
    }
    for (std::size_t k = 0; k < nodes; ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j < nodes; ++j) {
        s += fv[j] * std::cos(std::numbers::pi * static_cast<double>(k) *
                              (static_cast<double>(j) + 0.5) / static_cast<double>(nodes));
      }
      c[k] = 2.0 * s / static_cast<double>(nodes);
    }
    const double tail = std::abs(c[nodes - 1]) + std::abs(c[nodes - 2]);
    // rounding floor of the transform
    const double floor = 16.0 * std::numeric_limits<double>::epsilon() * std::sqrt(static_cast<double>(nodes));
    if (tail < std::max(options_.chebyshev_tolerance * 1e-2, floor) || nodes >= (1u << 16)) break;
  }
  std::size_t keep = c.size();
  while (keep > 1 && std::abs(c[keep - 1]) < options_.chebyshev_tolerance) --keep;
  c.resize(keep);
  return c;
}

VertexField HeatSemigroup::apply(double t, const VertexField& v) const {
  if (t < 0.0) throw std::invalid_argument("heat semigroup needs t >= 0");
  const VertexField u = v.window() == matrix_.window() ? v : v.on(matrix_.window());
  if (t == 0.0) return u;
  if (method_ == HeatMethod::eigen) {
    return apply_spectral_function([t](double l) { return std::exp(-t * l); }, *dec_, u);
  }
  const auto coef = chebyshev_coefficients(t);
  const CsrMatrix& a = matrix_.csr();
  const std::size_t n = matrix_.size();
  const double half = bound_ / 2.0;
  const Exec ex = options_.exec;
  std::vector<Complex> out(n);
  const bool real = u.is_real();
  for (int part = 0; part < (real ? 1 : 2); ++part) {
    std::vector<double> t0(n), t1(n), t2(n), acc(n), tmp(n);
    for (std::size_t i = 0; i < n; ++i) t0[i] = part == 0 ? u.at_index(i).real() : u.at_index(i).imag();
    // Y x = (M x) / half - x
    auto apply_y = [&](const std::vector<double>& x, std::vector<double>& y) {
      kernels::spmv(ex, a, x, y);
      for (std::size_t i = 0; i < n; ++i) y[i] = y[i] / half - x[i];
    };
    for (std::size_t i = 0; i < n; ++i) acc[i] = 0.5 * coef[0] * t0[i];
    if (coef.size() > 1) {
      apply_y(t0, t1);
      kernels::axpy(ex, coef[1], t1, acc);
      for (std::size_t k = 2; k < coef.size(); ++k) {
        apply_y(t1, tmp);
        for (std::size_t i = 0; i < n; ++i) t2[i] = 2.0 * tmp[i] - t0[i];
        kernels::axpy(ex, coef[k], t2, acc);
        std::swap(t0, t1);
        std::swap(t1, t2);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      out[i] += part == 0 ? Complex(acc[i], 0.0) : Complex(0.0, acc[i]);
    }
  }
  return VertexField(matrix_.window(), std::move(out));
}

VertexField heat_apply(const BandedMatrix& m, double t, const VertexField& v,
                       const HeatOptions& options) {
  if (t < 0.0) throw std::invalid_argument("heat semigroup needs t >= 0");
  return HeatSemigroup(m, options).apply(t, v);
}

BoundaryCoupling boundary_coupling(const GraphSystem& g, const Window& w) {
  require_window(g, w);
  BoundaryCoupling bc;
  std::set<Vertex> outside, inside;
  for (Vertex x : w.vertices()) {
    for (const auto& nb : g.neighbors(x)) {
      if (w.contains(nb.vertex)) continue;
      bc.crossing_edges.push_back({x, nb.vertex, nb.conductance});
      outside.insert(nb.vertex);
      inside.insert(x);
    }
  }
  bc.outside_vertices.assign(outside.begin(), outside.end());
  bc.inside_vertices.assign(inside.begin(), inside.end());
  if (bc.crossing_edges.empty()) return bc;

  const std::size_t rows = bc.outside_vertices.size();
  const std::size_t cols = bc.inside_vertices.size();
  bc.coupling_matrix = RealMatrix(rows, cols);
  auto pos = [](const std::vector<Vertex>& v, Vertex x) {
    return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
  };
  for (const auto& e : bc.crossing_edges) {
    bc.coupling_matrix(pos(bc.outside_vertices, e.outside), pos(bc.inside_vertices, e.inside)) =
        e.conductance;
  }
  // power iteration on TᵀT
  const RealMatrix& tm = bc.coupling_matrix;
  std::vector<double> x(cols, 1.0 / std::sqrt(static_cast<double>(cols))), y(rows), z(cols);
  double sigma = 0.0;
  for (std::size_t it = 1; it <= 10000; ++it) {
    for (std::size_t r = 0; r < rows; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < cols; ++c) s += tm(r, c) * x[c];
      y[r] = s;
    }
    std::fill(z.begin(), z.end(), 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) z[c] += tm(r, c) * y[r];
    }
    double nz = 0.0;
    for (double e : z) nz += e * e;
    nz = std::sqrt(nz);
    const double est = std::sqrt(nz);
    bc.iterations = it;
    if (nz == 0.0) {
      sigma = 0.0;
      break;
    }
    for (std::size_t c = 0; c < cols; ++c) x[c] = z[c] / nz;
    if (std::abs(est - sigma) <= 1e-12 * est) {
      sigma = est;
      break;
    }
    sigma = est;
  }
  bc.lambda_pf = sigma;
  return bc;
}

TruncationCheck truncation_error_check(const GraphSystem& g, const Window& w_small,
                                       const Window& w_ref, double t, const VertexField& v,
                                       const HeatOptions& options) {
  if (t < 0.0) throw std::invalid_argument("heat semigroup needs t >= 0");
  if (!w_ref.contains(w_small)) throw std::invalid_argument("reference window must contain the test window");
  if (w_ref.size() < 4 * w_small.size()) {
    throw std::invalid_argument("reference window must be at least 4x the test window");
  }
  for (Vertex x : v.support()) {
    if (!w_small.contains(x)) throw std::invalid_argument("field is not supported in the test window");
  }
  TruncationCheck out;
  out.t = t;
  out.lambda_pf = boundary_coupling(g, w_small).lambda_pf;
  const auto small = heat_apply(assemble_matrix(g, w_small, Boundary::compressed), t, v.on(w_small), options);
  const auto ref = heat_apply(assemble_matrix(g, w_ref, Boundary::compressed), t, v.on(w_ref), options);
  out.lhs = (ref - small.on(w_ref)).norm();
  out.bound = out.lambda_pf * t * v.norm();
  out.pass = out.lhs <= out.bound + 1e-9;
  return out;
}

VertexField truncation_difference(const GraphSystem& g, const Window& w, const VertexField& v) {
  for (Vertex x : v.support()) {
    if (!w.contains(x)) throw std::invalid_argument("field is not supported in the window");
  }
  const VertexField inside = v.on(w);
  const VertexField full = apply_laplacian_extended(g, inside);
  const VertexField trunc = apply_laplacian(g, inside, Boundary::compressed).field;
  VertexField diff = full - trunc.on(full.window());
  double scale = std::max(1.0, inside.max_abs());
  for (std::size_t i = 0; i < diff.size(); ++i) {
    const Vertex x = diff.window()[i];
    Complex expected{};
    if (!w.contains(x)) {
      for (const auto& nb : g.neighbors(x)) expected -= nb.conductance * inside(nb.vertex);
    }
    if (std::abs(diff.at_index(i) - expected) > 1e-12 * scale * std::max(1.0, weighted_degree(g, x))) {
      throw std::logic_error("boundary difference does not match the crossing-edge formula");
    }
  }
  return diff;
}

}  // namespace lapnet
