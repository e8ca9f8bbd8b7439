#include "lapnet/defect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lapnet/dense.hpp"

namespace lapnet {

namespace {

// Rows 0..r-1 of the equilibrated system in band storage: row i keeps
// columns i-2b .. i+b, which is where the LQ sweep can fill in.
struct BandSystem {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::int64_t b = 0;
  std::size_t width = 0;
  std::vector<Complex> data;

  Complex& at(std::size_t i, std::int64_t col) {
    return data[i * width + static_cast<std::size_t>(col - (static_cast<std::int64_t>(i) - 2 * b))];
  }
  bool in_band(std::size_t i, std::int64_t col) const {
    const auto ii = static_cast<std::int64_t>(i);
    return col >= ii - 2 * b && col <= ii + b && col >= 0 && col < static_cast<std::int64_t>(cols);
  }
};

struct Reflector {
  std::vector<Complex> v;  // acts on columns i..i+b
  double tau = 0.0;
};

BandSystem build_system(const HalfLineBandedOperator& m, Complex shift, std::size_t n) {
  BandSystem s;
  s.b = m.bandwidth();
  s.cols = n + 1;
  s.rows = n + 1 - static_cast<std::size_t>(s.b);
  s.width = static_cast<std::size_t>(3 * s.b + 1);
  s.data.assign(s.rows * s.width, Complex{});
  for (std::size_t i = 0; i < s.rows; ++i) {
    const auto ii = static_cast<std::int64_t>(i);
    for (const auto& e : m.scaled_row(ii)) s.at(i, ii + e.offset) += e.value;
    s.at(i, ii) -= shift * std::exp(-m.log_row_scale(ii));
    double top = 0.0;
    for (std::int64_t c = ii - 2 * s.b; c <= ii + s.b; ++c) {
      if (s.in_band(i, c)) top = std::max(top, std::abs(s.at(i, c)));
    }
    if (top > 0.0) {
      for (std::int64_t c = ii - 2 * s.b; c <= ii + s.b; ++c) {
        if (s.in_band(i, c)) s.at(i, c) /= top;
      }
    }
  }
  return s;
}

// A H_0 H_1 ... H_{r-1} = [L 0]
std::vector<Reflector> lq_factor(BandSystem& s) {
  const std::size_t len = static_cast<std::size_t>(s.b) + 1;
  std::vector<Reflector> hs(s.rows);
  for (std::size_t i = 0; i < s.rows; ++i) {
    const auto ii = static_cast<std::int64_t>(i);
    Reflector& h = hs[i];
    h.v.assign(len, Complex{});
    double tail = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
      h.v[k] = std::conj(s.at(i, ii + static_cast<std::int64_t>(k)));
      if (k > 0) tail += std::norm(h.v[k]);
    }
    if (tail == 0.0) continue;
    const double norm = std::sqrt(tail + std::norm(h.v[0]));
    const Complex phase = std::abs(h.v[0]) > 0.0 ? h.v[0] / std::abs(h.v[0]) : Complex(1.0);
    const Complex beta = -phase * norm;
    h.v[0] -= beta;
    double vv = 0.0;
    for (const auto& z : h.v) vv += std::norm(z);
    h.tau = 2.0 / vv;
    const std::size_t last = std::min(s.rows - 1, i + 2 * static_cast<std::size_t>(s.b));
    for (std::size_t j = i; j <= last; ++j) {
      Complex dot{};
      for (std::size_t k = 0; k < len; ++k) dot += s.at(j, ii + static_cast<std::int64_t>(k)) * h.v[k];
      for (std::size_t k = 0; k < len; ++k) {
        s.at(j, ii + static_cast<std::int64_t>(k)) -= h.tau * dot * std::conj(h.v[k]);
      }
    }
  }
  return hs;
}

// L x for the lower-triangular factor left in the band storage.
std::vector<Complex> l_apply(BandSystem& s, const std::vector<Complex>& x, bool adjoint) {
  std::vector<Complex> y(s.rows);
  for (std::size_t i = 0; i < s.rows; ++i) {
    const auto ii = static_cast<std::int64_t>(i);
    for (std::int64_t c = std::max<std::int64_t>(0, ii - 2 * s.b); c <= ii; ++c) {
      const Complex l = s.at(i, c);
      if (adjoint) y[static_cast<std::size_t>(c)] += std::conj(l) * x[i];
      else y[i] += l * x[static_cast<std::size_t>(c)];
    }
  }
  return y;
}

// Solves L x = y (forward) or L^H x = y (backward).
std::vector<Complex> l_solve(BandSystem& s, std::vector<Complex> y, bool adjoint) {
  const auto r = static_cast<std::int64_t>(s.rows);
  if (!adjoint) {
    for (std::int64_t i = 0; i < r; ++i) {
      Complex acc = y[i];
      for (std::int64_t c = std::max<std::int64_t>(0, i - 2 * s.b); c < i; ++c) {
        acc -= s.at(static_cast<std::size_t>(i), c) * y[c];
      }
      y[i] = acc / s.at(static_cast<std::size_t>(i), i);
    }
  } else {
    for (std::int64_t i = r - 1; i >= 0; --i) {
      Complex acc = y[i];
      for (std::int64_t j = i + 1; j <= std::min(r - 1, i + 2 * s.b); ++j) {
        acc -= std::conj(s.at(static_cast<std::size_t>(j), i)) * y[j];
      }
      y[i] = acc / std::conj(s.at(static_cast<std::size_t>(i), i));
    }
  }
  return y;
}

double vec_norm(const std::vector<Complex>& x) {
  double s = 0.0;
  for (const auto& z : x) s += std::norm(z);
  return std::sqrt(s);
}

void normalize(std::vector<Complex>& x) {
  const double n = vec_norm(x);
  for (auto& z : x) z /= n;
}

std::vector<Complex> start_vector(std::size_t n) {
  std::vector<Complex> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = Complex(1.0 + 0.3 * std::sin(0.7 * static_cast<double>(i)), 0.2 * std::cos(1.3 * static_cast<double>(i)));
  }
  normalize(x);
  return x;
}

// Extreme singular values of L by power and inverse iteration on L^H L.
std::pair<double, double> singular_range(BandSystem& s) {
  for (std::size_t i = 0; i < s.rows; ++i) {
    if (s.at(i, static_cast<std::int64_t>(i)) == Complex{}) return {0.0, 1.0};
  }
  auto x = start_vector(s.rows);
  double smax = 0.0;
  for (int it = 0; it < 200; ++it) {
    auto y = l_apply(s, l_apply(s, x, false), true);
    const double est = std::sqrt(vec_norm(y));
    x = std::move(y);
    normalize(x);
    if (std::abs(est - smax) <= 1e-10 * est) {
      smax = est;
      break;
    }
    smax = est;
  }
  x = start_vector(s.rows);
  double smin = 0.0;
  for (int it = 0; it < 200; ++it) {
    auto y = l_solve(s, l_solve(s, x, true), false);
    const double est = 1.0 / std::sqrt(vec_norm(y));
    x = std::move(y);
    normalize(x);
    if (std::abs(est - smin) <= 1e-10 * est) {
      smin = est;
      break;
    }
    smin = est;
  }
  return {smin, smax};
}

}  // namespace

DefectWindow defect_window(const HalfLineBandedOperator& m, Complex shift, std::size_t n_max,
                           const DefectOptions& options) {
  const auto b = static_cast<std::size_t>(m.bandwidth());
  if (b == 0 || n_max < 4 * b) throw std::invalid_argument("defect probe window too small");
  DefectWindow out;
  out.n_max = n_max;
  BandSystem s = build_system(m, shift, n_max);
  out.rows = s.rows;
  out.kernel_dim = s.cols - s.rows;
  auto hs = lq_factor(s);
  auto [smin, smax] = singular_range(s);
  out.sigma_min = smin;
  out.sigma_max = smax;
  out.gate_ok = smin >= options.near_null * smax;

  // kernel basis x_j = H_0 ... H_{r-1} e_j, j = r..N
  const std::size_t cols = s.cols;
  std::vector<std::vector<Complex>> basis;
  for (std::size_t j = s.rows; j < cols; ++j) {
    std::vector<Complex> x(cols);
    x[j] = 1.0;
    for (std::size_t i = s.rows; i-- > 0;) {
      const Reflector& h = hs[i];
      if (h.tau == 0.0) continue;
      Complex dot{};
      for (std::size_t k = 0; k <= b; ++k) dot += std::conj(h.v[k]) * x[i + k];
      for (std::size_t k = 0; k <= b; ++k) x[i + k] -= h.tau * h.v[k] * dot;
    }
    basis.push_back(std::move(x));
  }

  const std::size_t kdim = basis.size();
  const auto tail_start = static_cast<std::size_t>(
      std::ceil((1.0 - options.tail_fraction) * static_cast<double>(cols)));
  ComplexMatrix gram(kdim, kdim);
  for (std::size_t p = 0; p < kdim; ++p) {
    for (std::size_t q = 0; q < kdim; ++q) {
      Complex acc{};
      for (std::size_t n = tail_start; n < cols; ++n) acc += std::conj(basis[p][n]) * basis[q][n];
      gram(p, q) = acc;
    }
  }
  auto eig = jacobi_eigh(gram, {.exec = Exec::serial});
  for (std::size_t c = 0; c < kdim; ++c) {
    std::vector<Complex> y(cols);
    for (std::size_t p = 0; p < kdim; ++p) {
      for (std::size_t n = 0; n < cols; ++n) y[n] += eig.vectors(p, c) * basis[p][n];
    }
    double lo = 0.0, hi = 0.0;
    for (std::size_t n = cols / 4; n < cols / 2; ++n) lo += std::norm(y[n]);
    for (std::size_t n = cols / 2; n < cols; ++n) hi += std::norm(y[n]);
    DefectCandidate cand;
    cand.tail_mass = std::max(eig.values[c], 0.0);
    if (lo > 0.0) cand.decay_exponent = 0.5 - 0.5 * std::log2(hi / lo);
    else cand.decay_exponent = hi > 0.0 ? -std::numeric_limits<double>::infinity() : 0.0;
    cand.square_summable = cand.tail_mass < options.tail_threshold;
    if (cand.square_summable) ++out.count;
    out.candidates.push_back(cand);
  }
  return out;
}

ShootingReport shoot(const HalfLineBandedOperator& m, Complex shift, int steps) {
  if (m.bandwidth() != 1) throw std::invalid_argument("forward shooting needs a tridiagonal operator");
  ShootingReport rep;
  std::vector<Complex> v{1.0};
  for (int n = 0; n < steps; ++n) {
    Complex lower{}, diag{}, upper{};
    for (const auto& e : m.scaled_row(n)) {
      if (e.offset == -1) lower = e.value;
      else if (e.offset == 0) diag = e.value;
      else upper = e.value;
    }
    diag -= shift * std::exp(-m.log_row_scale(n));
    if (upper == Complex{}) break;
    Complex next = -(diag * v[static_cast<std::size_t>(n)] +
                     (n > 0 ? lower * v[static_cast<std::size_t>(n - 1)] : Complex{})) / upper;
    const bool stalled = std::abs(next - v[static_cast<std::size_t>(n)]) <=
                         4.0 * std::numeric_limits<double>::epsilon() * std::abs(next);
    if (stalled) break;
    v.push_back(next);
    if (std::abs(next) > 1e150) break;
  }
  rep.values = v;
  const std::size_t len = v.size();
  if (len >= 2) rep.growth_rate = std::abs(v[len - 1]) / std::abs(v[len - 2]);
  rep.monotone_growth = true;
  for (std::size_t i = 1; i < len; ++i) {
    if (!(std::abs(v[i]) >= std::abs(v[i - 1]))) rep.monotone_growth = false;
  }
  double acc = 0.0;
  for (std::size_t n = 0; n + 1 < len; ++n) {
    Complex mv{};
    for (const auto& e : m.row(static_cast<std::int64_t>(n))) {
      mv += e.value * v[static_cast<std::size_t>(static_cast<std::int64_t>(n) + e.offset)];
    }
    acc += (std::conj(v[n]) * mv).real();
    rep.truncated_energies.push_back(acc);
  }
  return rep;
}

DefectReport defect_probe(const HalfLineBandedOperator& m, Complex shift,
                          const DefectOptions& options) {
  DefectReport rep;
  rep.model = m.name();
  rep.shift = shift;
  rep.options = options;
  const std::size_t n = m.n_max();
  rep.windows.push_back(defect_window(m, shift, n, options));
  rep.windows.push_back(defect_window(m, shift, 2 * n, options));
  const auto& a = rep.windows[0];
  const auto& b = rep.windows[1];
  bool ok = true;
  if (!a.gate_ok || !b.gate_ok) {
    ok = false;
    rep.notes.push_back("rectangular system has extra near-null directions (sigma gate failed)");
  }
  if (a.count != b.count) {
    ok = false;
    rep.notes.push_back("counts differ between n_max=" + std::to_string(a.n_max) + " (" +
                        std::to_string(a.count) + ") and n_max=" + std::to_string(b.n_max) + " (" +
                        std::to_string(b.count) + ")");
  }
  rep.status = ok ? "ok" : "inconclusive";
  if (ok) rep.estimated_count = a.count;
  if (m.bandwidth() == 1) rep.shooting = shoot(m, shift, options.shoot_steps);
  return rep;
}

DeficiencyIndices deficiency_probe_banded(const HalfLineBandedOperator& m,
                                          const DefectOptions& options) {
  DeficiencyIndices out{defect_probe(m, Complex(0.0, 1.0), options),
                        defect_probe(m, Complex(0.0, -1.0), options), std::nullopt, ""};
  if (out.plus.estimated_count && out.minus.estimated_count) {
    out.indices = std::pair(*out.plus.estimated_count, *out.minus.estimated_count);
    out.status = "ok";
  } else {
    out.status = "inconclusive";
  }
  return out;
}

}  // namespace lapnet
