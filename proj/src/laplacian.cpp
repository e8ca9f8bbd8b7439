#include "lapnet/laplacian.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "lapnet/json_out.hpp"

namespace lapnet {

std::string to_string(Boundary b) { return b == Boundary::induced ? "induced" : "compressed"; }

Boundary parse_boundary(const std::string& s) {
  if (s == "induced") return Boundary::induced;
  if (s == "compressed") return Boundary::compressed;
  throw std::invalid_argument("unknown boundary mode \"" + s + "\"");
}

BandedMatrix::BandedMatrix(Window w, CsrMatrix csr, Boundary boundary, bool hermitian)
    : window_(std::move(w)), csr_(std::move(csr)), boundary_(boundary), hermitian_(hermitian) {
  if (csr_.rows != window_.size() || csr_.cols != window_.size()) {
    throw std::invalid_argument("matrix shape does not match its window");
  }
  for (std::size_t r = 0; r < csr_.rows; ++r) {
    for (std::size_t k = csr_.row_ptr[r]; k < csr_.row_ptr[r + 1]; ++k) {
      if (csr_.val[k] == 0.0) continue;
      std::size_t c = csr_.col[k];
      bandwidth_ = std::max(bandwidth_, r > c ? r - c : c - r);
    }
  }
}

double BandedMatrix::entry(Vertex x, Vertex y) const {
  auto i = window_.index_of(x);
  auto j = window_.index_of(y);
  if (!i || !j) return 0.0;
  return csr_.entry(*i, *j);
}

VertexField BandedMatrix::apply(const VertexField& v, Exec ex) const {
  const VertexField u = v.window() == window_ ? v : v.on(window_);
  const std::size_t n = size();
  std::vector<double> re(n), im(n), yre(n), yim(n);
  for (std::size_t i = 0; i < n; ++i) {
    re[i] = u.at_index(i).real();
    im[i] = u.at_index(i).imag();
  }
  kernels::spmv(ex, csr_, re, yre);
  std::vector<Complex> out(n);
  if (u.is_real()) {
    for (std::size_t i = 0; i < n; ++i) out[i] = yre[i];
  } else {
    kernels::spmv(ex, csr_, im, yim);
    for (std::size_t i = 0; i < n; ++i) out[i] = {yre[i], yim[i]};
  }
  return VertexField(window_, std::move(out));
}

RealMatrix BandedMatrix::dense() const {
  RealMatrix m(size(), size());
  for (std::size_t r = 0; r < csr_.rows; ++r) {
    for (std::size_t k = csr_.row_ptr[r]; k < csr_.row_ptr[r + 1]; ++k) m(r, csr_.col[k]) = csr_.val[k];
  }
  return m;
}

std::string BandedMatrix::dump_csv() const {
  std::ostringstream os;
  os << "# window=" << window_.describe() << " boundary=" << to_string(boundary_)
     << " bandwidth=" << bandwidth_ << "\n";
  os << "row,col,value\n";
  for (std::size_t r = 0; r < csr_.rows; ++r) {
    std::vector<std::pair<Vertex, double>> row;
    for (std::size_t k = csr_.row_ptr[r]; k < csr_.row_ptr[r + 1]; ++k) {
      row.emplace_back(window_[csr_.col[k]], csr_.val[k]);
    }
    std::sort(row.begin(), row.end());
    for (const auto& [c, value] : row) {
      os << window_[r] << "," << c << "," << format_double(value) << "\n";
    }
  }
  return os.str();
}

std::string TruncationReport::message() const {
  if (!truncated()) return "";
  std::ostringstream os;
  os << "boundary truncation: " << exposed.size()
     << " support vertices have neighbours outside the window (" << crossing_edges
     << " crossing edges)";
  return os.str();
}

namespace {

void require_field_window(const GraphSystem& g, const VertexField& v) {
  require_window(g, v.window());
}

}  // namespace

LaplacianResult apply_laplacian(const GraphSystem& g, const VertexField& v, Boundary boundary) {
  require_field_window(g, v);
  const Window& w = v.window();
  std::vector<Complex> out(w.size());
  TruncationReport report;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Vertex x = w[i];
    const Complex vx = v.at_index(i);
    Complex acc{};
    bool exposed = false;
    for (const auto& nb : g.neighbors(x)) {
      auto j = w.index_of(nb.vertex);
      if (j) {
        acc += nb.conductance * (vx - v.at_index(*j));
      } else {
        if (boundary == Boundary::compressed) acc += nb.conductance * vx;
        if (vx != Complex{}) {
          exposed = true;
          ++report.crossing_edges;
        }
      }
    }
    if (exposed) report.exposed.push_back(x);
    out[i] = acc;
  }
  return {VertexField(w, std::move(out)), std::move(report)};
}

VertexField apply_laplacian_extended(const GraphSystem& g, const VertexField& v) {
  require_field_window(g, v);
  const Window& w = v.window();
  std::vector<Vertex> verts(w.vertices().begin(), w.vertices().end());
  for (Vertex x : w.vertices()) {
    for (const auto& nb : g.neighbors(x)) {
      if (!w.contains(nb.vertex)) verts.push_back(nb.vertex);
    }
  }
  Window ext = Window::of(std::move(verts));
  std::vector<Complex> out(ext.size());
  for (std::size_t i = 0; i < ext.size(); ++i) {
    const Vertex x = ext[i];
    const Complex vx = v(x);
    Complex acc{};
    for (const auto& nb : g.neighbors(x)) acc += nb.conductance * (vx - v(nb.vertex));
    out[i] = acc;
  }
  return VertexField(std::move(ext), std::move(out));
}

double weighted_degree(const GraphSystem& g, Vertex x) {
  double b = 0.0;
  for (const auto& nb : g.neighbors(x)) b += nb.conductance;
  return b;
}

BandedMatrix assemble_matrix(const GraphSystem& g, const Window& w, Boundary boundary) {
  require_window(g, w);
  CsrMatrix m;
  m.rows = m.cols = w.size();
  m.row_ptr.reserve(w.size() + 1);
  for (std::size_t i = 0; i < w.size(); ++i) {
    std::vector<std::pair<std::size_t, double>> row;
    double diag = 0.0;
    for (const auto& nb : g.neighbors(w[i])) {
      auto j = w.index_of(nb.vertex);
      if (j) {
        row.emplace_back(*j, -nb.conductance);
        diag += nb.conductance;
      } else if (boundary == Boundary::compressed) {
        diag += nb.conductance;
      }
    }
    row.emplace_back(i, diag);
    std::sort(row.begin(), row.end());
    for (const auto& [c, value] : row) {
      m.col.push_back(c);
      m.val.push_back(value);
    }
    m.row_ptr.push_back(m.col.size());
  }
  return BandedMatrix(w, std::move(m), boundary, true);
}

BandedMatrix multiply(const BandedMatrix& a, const BandedMatrix& b) {
  if (!(a.window() == b.window())) throw std::invalid_argument("product needs a common window");
  const CsrMatrix& x = a.csr();
  const CsrMatrix& y = b.csr();
  CsrMatrix m;
  m.rows = m.cols = a.size();
  for (std::size_t r = 0; r < x.rows; ++r) {
    std::map<std::size_t, double> acc;
    for (std::size_t k = x.row_ptr[r]; k < x.row_ptr[r + 1]; ++k) {
      const std::size_t mid = x.col[k];
      for (std::size_t l = y.row_ptr[mid]; l < y.row_ptr[mid + 1]; ++l) {
        acc[y.col[l]] += x.val[k] * y.val[l];
      }
    }
    for (const auto& [c, value] : acc) {
      if (value == 0.0) continue;
      m.col.push_back(c);
      m.val.push_back(value);
    }
    m.row_ptr.push_back(m.col.size());
  }
  return BandedMatrix(a.window(), std::move(m), a.boundary(), false);
}

double energy(const GraphSystem& g, const VertexField& v, TruncationReport* report) {
  require_field_window(g, v);
  const Window& w = v.window();
  double e = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    bool exposed = false;
    for (const auto& nb : g.neighbors(w[i])) {
      auto j = w.index_of(nb.vertex);
      if (j) {
        e += nb.conductance * std::norm(v.at_index(i) - v.at_index(*j));
      } else if (report) {
        ++report->crossing_edges;
        exposed = true;
      }
    }
    if (exposed && report && v.at_index(i) != Complex{}) report->exposed.push_back(w[i]);
  }
  return e;
}

Complex energy_bilinear(const GraphSystem& g, const VertexField& u, const VertexField& v) {
  const VertexField vv = v.window() == u.window() ? v : v.on(u.window());
  require_field_window(g, u);
  const Window& w = u.window();
  Complex e{};
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (const auto& nb : g.neighbors(w[i])) {
      auto j = w.index_of(nb.vertex);
      if (!j) continue;
      e += nb.conductance * std::conj(u.at_index(i) - u.at_index(*j)) *
           (vv.at_index(i) - vv.at_index(*j));
    }
  }
  return e;
}

double row_sum(const GraphSystem& g, const VertexField& v) {
  auto d = apply_laplacian_extended(g, v);
  Complex s{};
  for (Complex z : d.values()) s += z;
  return std::abs(s);
}

double row_sum_check(const GraphSystem& g, const Window& w) {
  double worst = 0.0;
  for (Vertex x : w.vertices()) {
    worst = std::max(worst, row_sum(g, VertexField::dirac(Window::of({x}), x)));
  }
  return worst;
}

}  // namespace lapnet
